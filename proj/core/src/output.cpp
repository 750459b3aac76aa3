namespace pld {
}  // namespace pld

#pragma once

// Buchberger elimination with a block order: the elimination variables are
// ordered above everything else (graded reverse lex within each block), so
// the basis elements free of those variables generate the elimination ideal.
// All stopping rules are deterministic operation counts, never wall-clock.

#include <string>
#include <vector>

#include "pld/mpoly.hpp"

namespace pld {

struct GroebnerBudget {
  long max_pairs = 20000;  // S-pair reductions attempted
  long max_basis = 500;    // basis elements retained
  long max_terms = 50000;  // term count of any intermediate polynomial
};

// Reduced Groebner basis of the input ideal in the block order
// (elim_vars >> remaining symbols; remaining symbols ordered by name).
// On budget exhaustion sets *exceeded and returns the partial basis, which
// must not be used for ideal membership.
std::vector<MPoly> groebner_basis(const std::vector<MPoly>& generators,
                                  const std::vector<std::string>& elim_vars,
                                  const GroebnerBudget& budget = {}, bool* exceeded = nullptr);

enum class ElimStatus {
  ok,               // elimination ideal generated by `generators`
  zero_ideal,       // elimination ideal is zero: the projection is dominant
  budget_exceeded,  // deterministic budget hit; nothing can be concluded
};

struct EliminationResult {
  ElimStatus status = ElimStatus::ok;
  std::vector<MPoly> generators;  // polynomials in the remaining symbols only
};

// Intersection of the ideal with the ring of non-eliminated symbols.
EliminationResult groebner_eliminate(const std::vector<MPoly>& generators,
                                     const std::vector<std::string>& elim_vars,
                                     const GroebnerBudget& budget = {});

// Codimension-one part of the variety of an ideal given by generators: the
// square-free part of the gcd of the generators, or zero if that gcd is
// constant (no codimension-one component) or the list is empty.
MPoly ideal_codim1_part(const std::vector<MPoly>& generators);

}  // namespace pld

#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace pld {

using Rat = mpq_class;
using cdouble = std::complex<double>;

// Library-wide error type; `what()` starts with a short kind tag like
// "parse:", "cycle:", "eval:" so callers can branch on the failure class
// without a taxonomy of exception types.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts "-3", "7/2" and the Julia-style "7//2".
Rat parse_rat(const std::string& s);

// Canonical "p/q" (or "p" when q = 1). With julia_style, "p//q".
std::string rat_str(const Rat& q, bool julia_style = false);

// Smallest-denominator continued-fraction convergent within tol of x.
// Idempotent on rationals that are exactly representable within tol.
Rat rationalize(double x, double tol = 1e-8);

}  // namespace pld

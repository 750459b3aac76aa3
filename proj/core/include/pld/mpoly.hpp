#pragma once

#include <map>
#include <string>
#include <vector>

#include "pld/rational.hpp"

namespace pld {

// Graded lexicographic order on integer exponent vectors: compare total
// degree first, then entries left to right. Used as the canonical term
// order for storage and printing.
struct GrlexLess {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

// Exact sparse multivariate Laurent polynomial over Q.
//
// Variables are kept sorted by name and trimmed to the support: a variable
// with zero exponent in every term is dropped, so structurally equal
// polynomials compare equal with operator== regardless of how they were
// built. Exponents may be negative (Laurent monomials); the operations that
// need honest polynomials (gcd, square-free part, exact division) say so.
class MPoly {
 public:
  using Terms = std::map<std::vector<int>, Rat, GrlexLess>;

  MPoly() = default;  // zero
  explicit MPoly(const Rat& c);
  explicit MPoly(long c);
  static MPoly var(const std::string& name, int exp = 1);
  static MPoly constant(const Rat& c) { return MPoly(c); }

  // Textual syntax: `+ - * ^ ( )`, rational literals "3", "5/2" (also
  // "5//2"), symbols [A-Za-z][A-Za-z0-9_]*, exponents may be negative.
  // parse and str round-trip exactly.
  static MPoly parse(const std::string& text);
  std::string str() const;

  const std::vector<std::string>& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant(); zero -> 0
  bool is_laurent() const;     // any negative exponent present
  bool is_monomial() const { return terms_.size() == 1; }

  int total_degree() const;  // max term degree; -1 for the zero polynomial
  int degree_in(const std::string& v) const;
  int min_degree_in(const std::string& v) const;
  bool depends_on(const std::string& v) const;

  bool operator==(const MPoly& o) const;
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  MPoly operator-() const;
  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator*(const Rat& c) const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);

  // e >= 0 always works; e < 0 only for nonzero monomials.
  MPoly pow(long e) const;

  MPoly derivative(const std::string& v) const;

  // Simultaneous substitution of symbols by polynomials. Substituting a
  // symbol by a polynomial that contains that same symbol is a cycle error.
  MPoly subst(const std::map<std::string, MPoly>& repl) const;

  // Floating evaluation. Every variable must be assigned; a zero value
  // raised to a negative exponent is an evaluation error.
  cdouble eval(const std::map<std::string, cdouble>& point) const;
  cdouble eval(const std::vector<cdouble>& point) const;  // aligned to vars()

  // Exact rational evaluation (oracle for the floating path).
  Rat eval_rat(const std::map<std::string, Rat>& point) const;

  // Largest term in graded lex. Error on the zero polynomial.
  std::pair<std::vector<int>, Rat> leading_term() const;

  // Coefficient of v^k, a polynomial in the remaining variables.
  MPoly coeff_in(const std::string& v, int k) const;

  // Positive rational c such that *this / c has coprime integer
  // coefficients. Error on zero.
  Rat content() const;

  // Integer coefficients, content 1, graded-lex-leading coefficient > 0.
  // Zero stays zero.
  MPoly normalized() const;

  // Multiply by the monomial clearing all negative exponents (identity on
  // honest polynomials). The zero set in the torus is unchanged.
  MPoly laurent_cleared() const;

  // Internal constructor: vars must be sorted and unique, exponent vectors
  // must match vars in length. Zero coefficients are pruned, unused
  // variables trimmed.
  static MPoly from_terms(std::vector<std::string> vars, Terms terms);

 private:
  std::vector<std::string> vars_;  // sorted, unique, all used by some term
  Terms terms_;                    // nonzero coefficients only

  void prune_and_trim();
  friend std::pair<MPoly, MPoly> aligned(const MPoly& a, const MPoly& b);
};

inline MPoly operator*(const Rat& c, const MPoly& p) { return p * c; }

// Both polynomials rewritten over the union of their variables.
std::pair<MPoly, MPoly> aligned(const MPoly& a, const MPoly& b);

// Exact division: if den divides num exactly, set quot and return true.
// Inputs must not be Laurent.
bool try_divide(const MPoly& num, const MPoly& den, MPoly* quot);

// Exact division that throws when den does not divide num.
MPoly divexact(const MPoly& num, const MPoly& den);

// Primitive-PRS multivariate gcd over Q, content extracted first. The
// result is normalized (integer, content 1, positive leading coefficient).
// gcd(0, b) = normalized b. Inputs must not be Laurent.
MPoly gcd_poly(const MPoly& a, const MPoly& b);

// Square-free part: same zero set, each irreducible factor once,
// normalized. Laurent input is cleared by a monomial first (harmless in
// the torus). Error on zero.
MPoly sqfree_part(const MPoly& p);

}  // namespace pld

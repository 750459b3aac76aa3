#pragma once

// Exact linear algebra over the rationals, the integers, and polynomial
// entries: Gaussian elimination, integer kernels and solves via column
// echelon forms, and fraction-free determinants.

#include <vector>

#include "pld/mpoly.hpp"

namespace pld {

using IVec = std::vector<mpz_class>;
using IMat = std::vector<IVec>;
using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

// Rank of a rational matrix.
int rank_rat(QMat a);

// Basis of the right kernel {x : a x = 0} of a rational matrix.
std::vector<QVec> nullspace_rat(const QMat& a);

// Determinant of a rational matrix.
Rat det_rat(QMat a);

// Solve a square rational system with polynomial right-hand sides; throws
// Error("linalg: singular system") if the matrix is not invertible.
std::vector<MPoly> solve_linear_mpoly(QMat a, std::vector<MPoly> rhs);

// Divide an integer vector by the gcd of its entries; sign is kept as-is.
// The zero vector is returned unchanged.
IVec primitive(IVec v);

// Basis of the integer kernel {x in Z^m : a x = 0}; the result spans a
// saturated sublattice.
std::vector<IVec> integer_kernel(const IMat& a);

// One integer solution of a x = b, if any.
bool integer_solve(const IMat& a, const IVec& b, IVec* x);

// Fraction-free (Bareiss) determinant of a matrix with polynomial entries.
MPoly det_mpoly(std::vector<std::vector<MPoly>> m);

// Binomial coefficient.
mpz_class binom(long n, long k);

}  // namespace pld

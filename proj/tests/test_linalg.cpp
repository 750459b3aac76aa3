// Exact linear algebra: rational elimination, integer lattice kernels,
// and fraction-free polynomial determinants.
#include <random>

#include "doctest.h"
#include "pld/linalg.hpp"

using namespace pld;

namespace {

QMat qmat(std::initializer_list<std::initializer_list<long>> rows) {
  QMat m;
  for (auto& r : rows) {
    QVec row;
    for (long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return m;
}

IMat imat(std::initializer_list<std::initializer_list<long>> rows) {
  IMat m;
  for (auto& r : rows) {
    IVec row;
    for (long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return m;
}

bool is_zero_vec(const IVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

IVec matvec(const IMat& a, const IVec& x) {
  IVec out(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  return out;
}

}  // namespace

TEST_CASE("rational rank, kernel, determinant") {
  CHECK(rank_rat(qmat({{1, 2}, {2, 4}})) == 1);
  CHECK(rank_rat(qmat({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}})) == 2);
  CHECK(rank_rat({}) == 0);

  CHECK(det_rat(qmat({{2, 1}, {1, 1}})) == Rat(1));
  CHECK(det_rat(qmat({{0, 1}, {1, 0}})) == Rat(-1));
  CHECK(det_rat(qmat({{1, 2}, {2, 4}})) == Rat(0));

  auto ns = nullspace_rat(qmat({{1, 1, 1}}));
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(v[0] + v[1] + v[2] == Rat(0));

  // rank + nullity = columns, on random integer matrices.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> val(-4, 4);
  for (int rep = 0; rep < 25; ++rep) {
    size_t r = 1 + rep % 4, c = 1 + (rep / 4) % 5;
    QMat a(r, QVec(c));
    for (auto& row : a)
      for (auto& x : row) x = Rat(val(rng));
    int rank = rank_rat(a);
    auto null_basis = nullspace_rat(a);
    CHECK(rank + static_cast<int>(null_basis.size()) == static_cast<int>(c));
    for (const auto& v : null_basis)
      for (size_t i = 0; i < r; ++i) {
        Rat dot(0);
        for (size_t j = 0; j < c; ++j) dot += a[i][j] * v[j];
        CHECK(dot == Rat(0));
      }
  }
}

TEST_CASE("square solve with polynomial right-hand sides") {
  // x + y = s, x - y = t  ->  x = (s+t)/2, y = (s-t)/2.
  QMat a = qmat({{1, 1}, {1, -1}});
  std::vector<MPoly> rhs = {MPoly::parse("s"), MPoly::parse("t")};
  auto sol = solve_linear_mpoly(a, rhs);
  CHECK(sol[0] == MPoly::parse("1/2*s + 1/2*t"));
  CHECK(sol[1] == MPoly::parse("1/2*s - 1/2*t"));
  CHECK_THROWS_AS(solve_linear_mpoly(qmat({{1, 2}, {2, 4}}), rhs), Error);
}

TEST_CASE("primitive vectors") {
  CHECK(primitive({mpz_class(4), mpz_class(-6)}) ==
        IVec({mpz_class(2), mpz_class(-3)}));
  CHECK(primitive({mpz_class(0), mpz_class(0)}) ==
        IVec({mpz_class(0), mpz_class(0)}));
  CHECK(primitive({mpz_class(-3)}) == IVec({mpz_class(-1)}));
}

TEST_CASE("integer kernel is a saturated lattice basis") {
  // Kernel of (1 1 1) has rank 2; every member must be an integer
  // combination of the basis (saturation).
  auto k = integer_kernel(imat({{1, 1, 1}}));
  CHECK(k.size() == 2);
  for (const auto& v : k) CHECK(v[0] + v[1] + v[2] == 0);

  // (2 4): kernel contains (2,-1), and saturation demands exactly that
  // primitive vector up to sign, not (4,-2).
  auto k2 = integer_kernel(imat({{2, 4}}));
  REQUIRE(k2.size() == 1);
  CHECK(primitive(k2[0]) == k2[0]);
  CHECK(k2[0][0] == -2 * k2[0][1]);

  // Random matrices: kernel members are annihilated, and the known solution
  // of a constructed system is recovered by membership.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> val(-3, 3);
  for (int rep = 0; rep < 20; ++rep) {
    size_t r = 1 + rep % 3, c = 2 + rep % 4;
    IMat a(r, IVec(c));
    for (auto& row : a)
      for (auto& x : row) x = val(rng);
    for (const auto& v : integer_kernel(a)) {
      CHECK_FALSE(is_zero_vec(v));
      CHECK(is_zero_vec(matvec(a, v)));
    }
  }

  // Full-rank square matrix: trivial kernel.
  CHECK(integer_kernel(imat({{1, 0}, {0, 1}})).empty());
}

TEST_CASE("integer solve") {
  IVec x;
  CHECK(integer_solve(imat({{2, 0}, {0, 3}}), {mpz_class(4), mpz_class(9)}, &x));
  CHECK(x == IVec({mpz_class(2), mpz_class(3)}));

  // 2x = 3 has no integer solution.
  CHECK_FALSE(integer_solve(imat({{2}}), {mpz_class(3)}, &x));

  // Inconsistent system.
  CHECK_FALSE(
      integer_solve(imat({{1, 1}, {1, 1}}), {mpz_class(0), mpz_class(1)}, &x));

  // Underdetermined but solvable.
  CHECK(integer_solve(imat({{1, 2, 3}}), {mpz_class(7)}, &x));
  CHECK(x[0] + 2 * x[1] + 3 * x[2] == 7);

  // Random consistency: a * x0 = b always solvable, solution verified.
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> val(-3, 3);
  for (int rep = 0; rep < 20; ++rep) {
    size_t r = 1 + rep % 3, c = 1 + rep % 4;
    IMat a(r, IVec(c));
    IVec x0(c);
    for (auto& row : a)
      for (auto& v : row) v = val(rng);
    for (auto& v : x0) v = val(rng);
    IVec b = matvec(a, x0);
    IVec got;
    REQUIRE(integer_solve(a, b, &got));
    CHECK(matvec(a, got) == b);
  }
}

TEST_CASE("fraction-free polynomial determinant") {
  using M = std::vector<std::vector<MPoly>>;
  auto p = [](const char* s) { return MPoly::parse(s); };

  M vander = {{p("1"), p("a"), p("a^2")},
              {p("1"), p("b"), p("b^2")},
              {p("1"), p("c"), p("c^2")}};
  CHECK(det_mpoly(vander) == p("(b - a)*(c - a)*(c - b)"));

  M sing = {{p("x"), p("y")}, {p("2*x"), p("2*y")}};
  CHECK(det_mpoly(sing) == MPoly());

  CHECK(det_mpoly({}) == MPoly(1L));
  CHECK(det_mpoly({{p("5")}}) == MPoly(5L));

  // Agreement with rational determinant after evaluation.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> val(-3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    size_t n = 2 + rep % 3;
    M m(n, std::vector<MPoly>(n));
    QMat q(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        long v = val(rng);
        m[i][j] = MPoly(v);
        q[i][j] = Rat(v);
      }
    MPoly d = det_mpoly(m);
    CHECK((d.is_zero() ? Rat(0) : d.constant_value()) == det_rat(q));
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(7, 0) == 1);
  CHECK(binom(4, 4) == 1);
  CHECK(binom(3, 5) == 0);
  CHECK(binom(9, 4) == 126);
}

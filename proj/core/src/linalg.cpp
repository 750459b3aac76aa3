#include "pld/linalg.hpp"

#include <algorithm>

namespace pld {

namespace {

// Reduce to row echelon form in place; returns the pivot column of each
// pivot row.
std::vector<int> echelon(QMat& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const size_t rows = a.size(), cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int rank_rat(QMat a) { return static_cast<int>(echelon(a).size()); }

std::vector<QVec> nullspace_rat(const QMat& a) {
  if (a.empty()) return {};
  QMat m = a;
  std::vector<int> pivots = echelon(m);
  const size_t cols = a[0].size();
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<QVec> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVec x(cols, Rat(0));
    x[free] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) {
      size_t c = pivots[k];
      x[c] = -m[k][free] / m[k][c];
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

Rat det_rat(QMat a) {
  const size_t n = a.size();
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(a[c], a[p]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::vector<MPoly> solve_linear_mpoly(QMat a, std::vector<MPoly> rhs) {
  const size_t n = a.size();
  if (rhs.size() != n) throw Error("linalg: shape mismatch");
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw Error("linalg: singular system");
    if (p != c) {
      std::swap(a[c], a[p]);
      std::swap(rhs[c], rhs[p]);
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      rhs[i] -= rhs[c] * f;
    }
  }
  std::vector<MPoly> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i] * (Rat(1) / a[i][i]);
  return x;
}

IVec primitive(IVec v) {
  mpz_class g = 0;
  for (const auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
  if (g == 0 || g == 1) return v;
  for (auto& e : v) e /= g;
  return v;
}

namespace {

// Column echelon form: returns (reduced matrix h, transform u) with
// a u = h, u unimodular, and the pivot row of each leading column of h.
struct ColEchelon {
  IMat h;
  IMat u;  // m x m, columns are the transform
  std::vector<int> pivot_row;  // per column of h: pivot row, or -1 for a zero column
};

ColEchelon column_echelon(const IMat& a) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  ColEchelon out;
  out.h = a;
  out.u.assign(cols, IVec(cols, 0));
  for (size_t i = 0; i < cols; ++i) out.u[i][i] = 1;
  out.pivot_row.assign(cols, -1);

  auto col_op = [&](size_t dst, size_t src, const mpz_class& f) {
    // column dst -= f * column src
    for (size_t r = 0; r < rows; ++r) out.h[r][dst] -= f * out.h[r][src];
    for (size_t r = 0; r < cols; ++r) out.u[r][dst] -= f * out.u[r][src];
  };
  auto col_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < rows; ++r) std::swap(out.h[r][i], out.h[r][j]);
    for (size_t r = 0; r < cols; ++r) std::swap(out.u[r][i], out.u[r][j]);
  };
  auto col_negate = [&](size_t i) {
    for (size_t r = 0; r < rows; ++r) out.h[r][i] = -out.h[r][i];
    for (size_t r = 0; r < cols; ++r) out.u[r][i] = -out.u[r][i];
  };

  size_t lead = 0;
  for (size_t r = 0; r < rows && lead < cols; ++r) {
    // Euclid across columns lead..cols-1 on row r until one nonzero remains.
    while (true) {
      size_t best = cols;
      for (size_t c = lead; c < cols; ++c) {
        if (out.h[r][c] == 0) continue;
        if (best == cols || abs(out.h[r][c]) < abs(out.h[r][best])) best = c;
      }
      if (best == cols) break;  // row r is zero on active columns
      col_swap(lead, best);
      bool cleared = true;
      for (size_t c = lead + 1; c < cols; ++c) {
        if (out.h[r][c] == 0) continue;
        mpz_class f = out.h[r][c] / out.h[r][lead];
        col_op(c, lead, f);
        if (out.h[r][c] != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (out.h[r][lead] != 0) {
      if (out.h[r][lead] < 0) col_negate(lead);
      out.pivot_row[lead] = static_cast<int>(r);
      ++lead;
    }
  }
  return out;
}

}  // namespace

std::vector<IVec> integer_kernel(const IMat& a) {
  if (a.empty() || a[0].empty()) {
    // kernel of an empty map is everything
    size_t m = a.empty() ? 0 : a[0].size();
    std::vector<IVec> basis;
    for (size_t i = 0; i < m; ++i) {
      IVec e(m, 0);
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  ColEchelon ce = column_echelon(a);
  const size_t cols = a[0].size();
  std::vector<IVec> basis;
  for (size_t c = 0; c < cols; ++c) {
    if (ce.pivot_row[c] != -1) continue;
    IVec x(cols);
    for (size_t r = 0; r < cols; ++r) x[r] = ce.u[r][c];
    basis.push_back(std::move(x));
  }
  return basis;
}

bool integer_solve(const IMat& a, const IVec& b, IVec* x) {
  if (a.empty()) return std::all_of(b.begin(), b.end(), [](const mpz_class& v) { return v == 0; });
  const size_t rows = a.size(), cols = a[0].size();
  if (b.size() != rows) throw Error("linalg: shape mismatch");
  ColEchelon ce = column_echelon(a);
  // Forward substitution in the column echelon form: a u = h, solve h y = b.
  IVec y(cols, 0);
  IVec resid = b;
  for (size_t c = 0; c < cols; ++c) {
    int pr = ce.pivot_row[c];
    if (pr < 0) break;
    const mpz_class& pivot = ce.h[pr][c];
    if (resid[pr] % pivot != 0) return false;
    mpz_class f = resid[pr] / pivot;
    y[c] = f;
    if (f != 0)
      for (size_t r = 0; r < rows; ++r) resid[r] -= f * ce.h[r][c];
  }
  for (size_t r = 0; r < rows; ++r)
    if (resid[r] != 0) return false;
  x->assign(cols, 0);
  for (size_t r = 0; r < cols; ++r)
    for (size_t c = 0; c < cols; ++c) (*x)[r] += ce.u[r][c] * y[c];
  return true;
}

MPoly det_mpoly(std::vector<std::vector<MPoly>> m) {
  const size_t n = m.size();
  if (n == 0) return MPoly(Rat(1));
  for (const auto& row : m)
    if (row.size() != n) throw Error("linalg: non-square matrix");
  MPoly prev(Rat(1));
  int sign = 1;
  for (size_t c = 0; c + 1 < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) return MPoly();
    if (p != c) {
      std::swap(m[c], m[p]);
      sign = -sign;
    }
    for (size_t i = c + 1; i < n; ++i) {
      for (size_t j = c + 1; j < n; ++j) {
        MPoly num = m[c][c] * m[i][j] - m[i][c] * m[c][j];
        MPoly q;
        if (!try_divide(num, prev, &q)) throw Error("linalg: fraction-free division failed");
        m[i][j] = std::move(q);
      }
      m[i][c] = MPoly();
    }
    prev = m[c][c];
  }
  MPoly det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

mpz_class binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace pld

#include "pld/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

namespace pld {

namespace {

constexpr double kDivergenceBound = 1e8;
constexpr double kRegularResidual = 1e-10;
constexpr double kSigmaRatio = 1e-8;
constexpr double kClusterTol = 1e-6;
constexpr double kTorusTol = 1e-6;
constexpr double kMaxStep = 0.1;
constexpr double kInitStep = 0.05;

double max_norm(const std::vector<cdouble>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

bool all_finite(const std::vector<cdouble>& v) {
  for (const auto& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

cdouble pow_int(cdouble b, int e) {
  cdouble r(1.0, 0.0);
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace

double Rng::uniform() { return (gen_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cdouble Rng::cgauss() {
  double re = gaussian();
  double im = gaussian();
  return cdouble(re, im);
}

cdouble Rng::unit() {
  double a = 2.0 * 3.14159265358979323846 * uniform();
  return cdouble(std::cos(a), std::sin(a));
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_lock;
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// CompiledSystem

CompiledSystem::CompiledSystem(const std::vector<MPoly>& eqs, std::vector<std::string> unknowns,
                               std::vector<std::string> params)
    : unknowns_(std::move(unknowns)), params_(std::move(params)) {
  std::map<std::string, int> xslot, pslot;
  for (size_t i = 0; i < unknowns_.size(); ++i) xslot[unknowns_[i]] = static_cast<int>(i);
  for (size_t i = 0; i < params_.size(); ++i) {
    if (xslot.count(params_[i])) throw Error("system: symbol is both unknown and parameter");
    pslot[params_[i]] = static_cast<int>(i);
  }
  for (const MPoly& f : eqs) {
    if (f.is_laurent()) throw Error("system: Laurent equation");
    const auto& fv = f.vars();
    std::vector<int> kind(fv.size()), slot(fv.size());
    for (size_t i = 0; i < fv.size(); ++i) {
      auto it = xslot.find(fv[i]);
      if (it != xslot.end()) {
        kind[i] = 0;
        slot[i] = it->second;
        continue;
      }
      auto jt = pslot.find(fv[i]);
      if (jt == pslot.end()) throw Error("system: unbound symbol '" + fv[i] + "'");
      kind[i] = 1;
      slot[i] = jt->second;
    }
    std::vector<Term> list;
    int deg = 0;
    for (const auto& [e, c] : f.terms()) {
      Term t;
      t.c = cdouble(c.get_d(), 0.0);
      int d = 0;
      for (size_t i = 0; i < fv.size(); ++i) {
        if (e[i] == 0) continue;
        if (kind[i] == 0) {
          t.ex.emplace_back(slot[i], e[i]);
          d += e[i];
        } else {
          t.ep.emplace_back(slot[i], e[i]);
        }
      }
      deg = std::max(deg, d);
      list.push_back(std::move(t));
    }
    degrees_.push_back(deg);
    terms_.push_back(std::move(list));
  }
}

int CompiledSystem::max_degree() const {
  int d = 0;
  for (int e : degrees_) d = std::max(d, e);
  return d;
}

void CompiledSystem::eval(const cdouble* x, const cdouble* p, cdouble* out) const {
  for (size_t q = 0; q < terms_.size(); ++q) {
    cdouble acc(0.0, 0.0);
    for (const Term& t : terms_[q]) {
      cdouble v = t.c;
      for (const auto& [s, e] : t.ex) v *= pow_int(x[s], e);
      for (const auto& [s, e] : t.ep) v *= pow_int(p[s], e);
      acc += v;
    }
    out[q] = acc;
  }
}

double CompiledSystem::scale(int eq, const cdouble* x, const cdouble* p) const {
  double acc = 0.0;
  for (const Term& t : terms_[eq]) {
    double v = std::abs(t.c);
    for (const auto& [s, e] : t.ex) v *= std::pow(std::abs(x[s]), e);
    for (const auto& [s, e] : t.ep) v *= std::pow(std::abs(p[s]), e);
    acc += v;
  }
  return acc;
}

double CompiledSystem::residual(const std::vector<cdouble>& x, const std::vector<cdouble>& p) const {
  std::vector<cdouble> f(terms_.size());
  eval(x.data(), p.data(), f.data());
  double worst = 0.0;
  for (int q = 0; q < size(); ++q)
    worst = std::max(worst, std::abs(f[q]) / std::max(1.0, scale(q, x.data(), p.data())));
  return worst;
}

// Partial derivatives term by term; a slot whose coordinate is exactly zero
// only contributes through its own derivative when the exponent is one.
void CompiledSystem::jac_x(const cdouble* x, const cdouble* p, Eigen::MatrixXcd& jac) const {
  jac.setZero(size(), dim());
  for (size_t q = 0; q < terms_.size(); ++q) {
    for (const Term& t : terms_[q]) {
      int zeros = 0, zero_slot = -1, zero_exp = 0;
      cdouble prod = t.c;
      for (const auto& [s, e] : t.ep) prod *= pow_int(p[s], e);
      for (const auto& [s, e] : t.ex) {
        if (x[s] == cdouble(0.0, 0.0)) {
          ++zeros;
          zero_slot = s;
          zero_exp = e;
        } else {
          prod *= pow_int(x[s], e);
        }
      }
      if (zeros >= 2) continue;
      if (zeros == 1) {
        if (zero_exp == 1) jac(q, zero_slot) += prod;
        continue;
      }
      for (const auto& [s, e] : t.ex) jac(q, s) += prod * (static_cast<double>(e) / x[s]);
    }
  }
}

void CompiledSystem::jac_p(const cdouble* x, const cdouble* p, Eigen::MatrixXcd& jac) const {
  jac.setZero(size(), param_count());
  for (size_t q = 0; q < terms_.size(); ++q) {
    for (const Term& t : terms_[q]) {
      int zeros = 0, zero_slot = -1, zero_exp = 0;
      cdouble prod = t.c;
      for (const auto& [s, e] : t.ex) prod *= pow_int(x[s], e);
      for (const auto& [s, e] : t.ep) {
        if (p[s] == cdouble(0.0, 0.0)) {
          ++zeros;
          zero_slot = s;
          zero_exp = e;
        } else {
          prod *= pow_int(p[s], e);
        }
      }
      if (zeros >= 2) continue;
      if (zeros == 1) {
        if (zero_exp == 1) jac(q, zero_slot) += prod;
        continue;
      }
      for (const auto& [s, e] : t.ep) jac(q, s) += prod * (static_cast<double>(e) / p[s]);
    }
  }
}

// ---------------------------------------------------------------------------
// Core predictor-corrector tracker

namespace {

struct Homotopy {
  int n = 0;
  // eval(x, t, out), jac(x, t, J), dt(x, t, out)
  std::function<void(const cdouble*, double, cdouble*)> eval;
  std::function<void(const cdouble*, double, Eigen::MatrixXcd&)> jac;
  std::function<void(const cdouble*, double, cdouble*)> dt;
};

enum class CoreState { reached, diverged, failed };

struct CoreResult {
  std::vector<cdouble> x;
  CoreState state = CoreState::failed;
};

CoreResult track_core(const Homotopy& H, std::vector<cdouble> x, const TrackerConfig& cfg) {
  const int n = H.n;
  Eigen::MatrixXcd J(n, n);
  Eigen::VectorXcd rhs(n), sol(n);
  std::vector<cdouble> buf(n);
  double t = 0.0, h = kInitStep;
  int streak = 0;

  auto velocity = [&](const std::vector<cdouble>& at, double tt, std::vector<cdouble>* v) {
    H.jac(at.data(), tt, J);
    H.dt(at.data(), tt, buf.data());
    for (int i = 0; i < n; ++i) rhs(i) = -buf[i];
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    sol = lu.solve(rhs);
    v->resize(n);
    for (int i = 0; i < n; ++i) {
      (*v)[i] = sol(i);
      if (!std::isfinite(sol(i).real()) || !std::isfinite(sol(i).imag())) return false;
    }
    return true;
  };

  std::vector<cdouble> k1, k2, k3, k4, xs(n), xp(n), xc(n);
  for (int step = 0; step < cfg.max_steps; ++step) {
    if (t >= 1.0) break;
    h = std::min(h, 1.0 - t);
    bool ok = true;
    // RK4 on the Davidenko equation dx/dt = -J^{-1} dH/dt
    ok = ok && velocity(x, t, &k1);
    if (ok) {
      for (int i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
      ok = velocity(xs, t + 0.5 * h, &k2);
    }
    if (ok) {
      for (int i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
      ok = velocity(xs, t + 0.5 * h, &k3);
    }
    if (ok) {
      for (int i = 0; i < n; ++i) xs[i] = x[i] + h * k3[i];
      ok = velocity(xs, t + h, &k4);
    }
    if (ok) {
      for (int i = 0; i < n; ++i)
        xp[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      // Newton corrector at t + h
      xc = xp;
      ok = false;
      for (int it = 0; it < 3; ++it) {
        H.jac(xc.data(), t + h, J);
        H.eval(xc.data(), t + h, buf.data());
        for (int i = 0; i < n; ++i) rhs(i) = -buf[i];
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
        sol = lu.solve(rhs);
        double dn = 0.0;
        bool finite = true;
        for (int i = 0; i < n; ++i) {
          xc[i] += sol(i);
          dn = std::max(dn, std::abs(sol(i)));
          finite = finite && std::isfinite(sol(i).real()) && std::isfinite(sol(i).imag());
        }
        if (!finite) break;
        if (dn <= cfg.step_tol * std::max(1.0, max_norm(xc))) {
          ok = true;
          break;
        }
      }
    }
    if (ok && all_finite(xc)) {
      x = xc;
      t += h;
      if (max_norm(x) > kDivergenceBound) return {std::move(x), CoreState::diverged};
      if (++streak >= 4) {
        h = std::min(2.0 * h, kMaxStep);
        streak = 0;
      }
    } else {
      h *= 0.5;
      streak = 0;
      if (h < cfg.min_step) {
        // Near-endpoint stall: hand the point to the refiner, which will
        // classify it (typically singular). Anywhere else it is a failure.
        if (1.0 - t < 1e-4) return {std::move(x), CoreState::reached};
        return {std::move(x), CoreState::failed};
      }
    }
  }
  if (t >= 1.0) return {std::move(x), CoreState::reached};
  return {std::move(x), CoreState::failed};
}

}  // namespace

TrackedPoint classify_point(const CompiledSystem& sys, const std::vector<cdouble>& p,
                            const std::vector<cdouble>& x0, const TrackerConfig& cfg) {
  const int n = sys.dim();
  TrackedPoint tp;
  tp.coords = x0;
  if (sys.size() != n) throw Error("classify: system is not square");
  Eigen::MatrixXcd J(n, n);
  Eigen::VectorXcd rhs(n), sol(n);
  std::vector<cdouble> f(n);
  std::vector<cdouble>& x = tp.coords;
  for (int it = 0; it < 60; ++it) {
    sys.jac_x(x.data(), p.data(), J);
    sys.eval(x.data(), p.data(), f.data());
    for (int i = 0; i < n; ++i) rhs(i) = -f[i];
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    sol = lu.solve(rhs);
    bool finite = true;
    double dn = 0.0;
    for (int i = 0; i < n; ++i)
      finite = finite && std::isfinite(sol(i).real()) && std::isfinite(sol(i).imag());
    if (!finite) break;
    for (int i = 0; i < n; ++i) {
      x[i] += sol(i);
      dn = std::max(dn, std::abs(sol(i)));
    }
    if (max_norm(x) > kDivergenceBound) {
      tp.status = PointStatus::diverged;
      return tp;
    }
    if (dn <= cfg.newton_tol * std::max(1.0, max_norm(x))) break;
  }
  if (!all_finite(x)) {
    tp.status = PointStatus::failed;
    return tp;
  }
  tp.residual = sys.residual(x, p);
  sys.jac_x(x.data(), p.data(), J);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& sv = svd.singularValues();
  tp.sigma_max = sv.size() ? sv(0) : 0.0;
  tp.sigma_min = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (tp.residual < kRegularResidual)
    tp.status = tp.sigma_min > kSigmaRatio * tp.sigma_max ? PointStatus::regular
                                                          : PointStatus::singular;
  else if (tp.residual < 1e-6)
    tp.status = PointStatus::singular;
  else
    tp.status = PointStatus::failed;
  return tp;
}

TrackedPoint track_parameter(const CompiledSystem& sys, const std::vector<cdouble>& p0,
                             const std::vector<cdouble>& p1, const std::vector<cdouble>& start,
                             const TrackerConfig& cfg) {
  const int n = sys.dim();
  if (sys.size() != n) throw Error("track: system is not square");
  if (static_cast<int>(p0.size()) != sys.param_count() || p0.size() != p1.size())
    throw Error("track: parameter count mismatch");
  std::vector<cdouble> dp(p0.size());
  for (size_t i = 0; i < p0.size(); ++i) dp[i] = p1[i] - p0[i];

  thread_local std::vector<cdouble> pbuf;
  auto at = [&](double t) -> const cdouble* {
    pbuf.resize(p0.size());
    for (size_t i = 0; i < p0.size(); ++i) pbuf[i] = p0[i] + t * dp[i];
    return pbuf.data();
  };

  Homotopy H;
  H.n = n;
  Eigen::MatrixXcd Jp;
  H.eval = [&](const cdouble* x, double t, cdouble* out) { sys.eval(x, at(t), out); };
  H.jac = [&](const cdouble* x, double t, Eigen::MatrixXcd& J) { sys.jac_x(x, at(t), J); };
  H.dt = [&](const cdouble* x, double t, cdouble* out) {
    sys.jac_p(x, at(t), Jp);
    for (int i = 0; i < n; ++i) {
      cdouble acc(0.0, 0.0);
      for (int j = 0; j < sys.param_count(); ++j) acc += Jp(i, j) * dp[j];
      out[i] = acc;
    }
  };

  CoreResult core = track_core(H, start, cfg);
  if (core.state == CoreState::diverged) {
    TrackedPoint tp;
    tp.coords = std::move(core.x);
    tp.status = PointStatus::diverged;
    return tp;
  }
  if (core.state == CoreState::failed) {
    TrackedPoint tp;
    tp.coords = std::move(core.x);
    tp.status = PointStatus::failed;
    return tp;
  }
  return classify_point(sys, p1, core.x, cfg);
}

bool points_close(const std::vector<cdouble>& a, const std::vector<cdouble>& b, double tol) {
  if (a.size() != b.size()) return false;
  double gap = 0.0;
  for (size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  double scale = std::max(1.0, std::max(max_norm(a), max_norm(b)));
  return gap <= tol * scale;
}

std::vector<int> cluster_points(const std::vector<std::vector<cdouble>>& pts, double tol) {
  std::vector<int> reps;
  for (size_t i = 0; i < pts.size(); ++i) {
    bool fresh = true;
    for (int r : reps)
      if (points_close(pts[i], pts[r], tol)) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(static_cast<int>(i));
  }
  return reps;
}

std::vector<TrackedPoint> solve_total_degree(const CompiledSystem& sys,
                                             const std::vector<cdouble>& params,
                                             const TrackerConfig& cfg, Rng& rng,
                                             SolveStats* stats,
                                             std::vector<TrackedPoint>* singular_out) {
  const int n = sys.dim();
  if (sys.size() != n) throw Error("total-degree solve: system is not square");
  if (static_cast<int>(params.size()) != sys.param_count())
    throw Error("total-degree solve: parameter count mismatch");
  const int D = sys.max_degree();
  if (D <= 0) return {};
  double bezout = std::pow(static_cast<double>(D), n);
  if (bezout > 1e5 + 0.5)
    throw Error("total-degree solve: path count " + std::to_string(static_cast<long>(bezout)) +
                " exceeds 100000");
  const long total = static_cast<long>(std::llround(bezout));

  cdouble gamma = cfg.gamma;
  if (gamma == cdouble(0.0, 0.0)) gamma = rng.unit();
  std::vector<cdouble> r(n);
  std::vector<std::vector<cdouble>> roots(n, std::vector<cdouble>(D));
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    do {
      r[i] = rng.cgauss();
    } while (std::abs(r[i]) < 0.3);
    cdouble base = std::pow(r[i], cdouble(1.0 / D, 0.0));
    for (int k = 0; k < D; ++k)
      roots[i][k] = base * cdouble(std::cos(two_pi * k / D), std::sin(two_pi * k / D));
  }

  Homotopy H;
  H.n = n;
  H.eval = [&](const cdouble* x, double t, cdouble* out) {
    sys.eval(x, params.data(), out);
    for (int i = 0; i < n; ++i)
      out[i] = t * out[i] + (1.0 - t) * gamma * (pow_int(x[i], D) - r[i]);
  };
  H.jac = [&](const cdouble* x, double t, Eigen::MatrixXcd& J) {
    sys.jac_x(x, params.data(), J);
    J *= t;
    for (int i = 0; i < n; ++i)
      J(i, i) += (1.0 - t) * gamma * static_cast<double>(D) * pow_int(x[i], D - 1);
  };
  H.dt = [&](const cdouble* x, double /*t*/, cdouble* out) {
    sys.eval(x, params.data(), out);
    for (int i = 0; i < n; ++i) out[i] -= gamma * (pow_int(x[i], D) - r[i]);
  };

  std::vector<TrackedPoint> ends(total);
  parallel_for(static_cast<int>(total), cfg.threads, [&](int path) {
    std::vector<cdouble> x(n);
    long code = path;
    for (int i = 0; i < n; ++i) {
      x[i] = roots[i][code % D];
      code /= D;
    }
    CoreResult core = track_core(H, std::move(x), cfg);
    if (core.state == CoreState::reached) {
      ends[path] = classify_point(sys, params, core.x, cfg);
    } else {
      ends[path].coords = std::move(core.x);
      ends[path].status =
          core.state == CoreState::diverged ? PointStatus::diverged : PointStatus::failed;
    }
  });

  SolveStats st;
  st.paths = static_cast<int>(total);
  std::vector<std::vector<cdouble>> regular_coords;
  std::vector<TrackedPoint> regular_points;
  for (auto& tp : ends) {
    switch (tp.status) {
      case PointStatus::regular:
        ++st.regular;
        regular_coords.push_back(tp.coords);
        regular_points.push_back(std::move(tp));
        break;
      case PointStatus::singular:
        ++st.singular;
        if (singular_out) singular_out->push_back(std::move(tp));
        break;
      case PointStatus::diverged:
        ++st.diverged;
        break;
      case PointStatus::failed:
        ++st.failed;
        break;
    }
  }
  std::vector<TrackedPoint> out;
  for (int rep : cluster_points(regular_coords, kClusterTol))
    out.push_back(std::move(regular_points[rep]));
  if (stats) *stats = st;
  return out;
}

// ---------------------------------------------------------------------------
// Monodromy

namespace {

struct UnionFind {
  std::vector<int> parent;
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return static_cast<int>(parent.size()) - 1;
  }
};

}  // namespace

MonodromyResult monodromy_solve(const CompiledSystem& sys, const std::vector<cdouble>& base_params,
                                const std::vector<std::vector<cdouble>>& seeds,
                                const TrackerConfig& cfg, Rng& rng, int stabilization,
                                int max_loops) {
  MonodromyResult res;
  std::vector<std::vector<cdouble>> coords;
  UnionFind uf;
  auto try_add = [&](TrackedPoint tp) -> int {
    if (!tp.regular()) return -1;
    for (size_t i = 0; i < coords.size(); ++i)
      if (points_close(coords[i], tp.coords, kClusterTol)) return static_cast<int>(i);
    coords.push_back(tp.coords);
    res.points.push_back(std::move(tp));
    return uf.add();
  };

  for (const auto& s : seeds) try_add(classify_point(sys, base_params, s, cfg));
  if (coords.empty()) throw Error("monodromy: no regular seed");

  // Two alternating triangle shapes keep the winding probability healthy for
  // discriminants near the origin and near the base point alike: fresh
  // vertices drawn at the coordinate scale of the base, and a rotation of
  // the base around a random nearby center (which winds around everything
  // inside the triangle by construction).
  auto make_vertices = [&](int parity, std::vector<cdouble>& q1, std::vector<cdouble>& q2) {
    const size_t m = base_params.size();
    q1.resize(m);
    q2.resize(m);
    if (parity == 0) {
      for (size_t i = 0; i < m; ++i) {
        double s = 0.7 * (1.0 + std::abs(base_params[i]));
        q1[i] = rng.cgauss() * s;
        q2[i] = rng.cgauss() * s;
      }
    } else {
      const cdouble w(-0.5, 0.8660254037844386);
      for (size_t i = 0; i < m; ++i) {
        cdouble c = base_params[i] + rng.cgauss() * (1.0 + std::abs(base_params[i]));
        q1[i] = c + w * (base_params[i] - c);
        q2[i] = c + w * w * (base_params[i] - c);
      }
    }
  };

  int calm = 0;
  while (calm < stabilization && res.loops < max_loops) {
    ++res.loops;
    std::vector<cdouble> q1, q2;
    make_vertices(res.loops % 2, q1, q2);
    const int count = static_cast<int>(coords.size());
    std::vector<TrackedPoint> landing(count);
    parallel_for(count, cfg.threads, [&](int i) {
      TrackedPoint a = track_parameter(sys, base_params, q1, coords[i], cfg);
      if (!a.regular()) {
        landing[i].status = a.status;
        return;
      }
      TrackedPoint b = track_parameter(sys, q1, q2, a.coords, cfg);
      if (!b.regular()) {
        landing[i].status = b.status;
        return;
      }
      landing[i] = track_parameter(sys, q2, base_params, b.coords, cfg);
    });
    bool productive = false;
    for (int i = 0; i < count; ++i) {
      if (!landing[i].regular()) continue;
      int j = try_add(std::move(landing[i]));
      if (j < 0) continue;
      if (uf.unite(i, j)) productive = true;
    }
    calm = productive ? 0 : calm + 1;
  }

  std::map<int, std::vector<int>> classes;
  for (size_t i = 0; i < coords.size(); ++i) classes[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
  for (auto& [root, members] : classes) res.orbits.push_back(std::move(members));
  return res;
}

// ---------------------------------------------------------------------------
// Roots of univariate polynomials

std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs) {
  double mx = 0.0;
  for (const auto& c : coeffs) mx = std::max(mx, std::abs(c));
  if (mx == 0.0) throw Error("roots: zero polynomial");
  std::vector<cdouble> c = coeffs;
  while (!c.empty() && std::abs(c.back()) < 1e-12 * mx) c.pop_back();
  if (c.size() <= 1) return {};
  const int d = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  std::vector<cdouble> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

// ---------------------------------------------------------------------------
// Euler characteristic

std::vector<MPoly> critical_equations(const std::vector<MPoly>& factors,
                                      const std::vector<std::string>& vars,
                                      const std::vector<std::string>& mu_names,
                                      const std::vector<std::string>& nu_names) {
  if (factors.empty()) throw Error("critical equations: no factors");
  if (mu_names.size() != factors.size() || nu_names.size() != vars.size())
    throw Error("critical equations: exponent name count mismatch");
  const size_t k = factors.size();
  std::vector<MPoly> prod_except(k, MPoly(Rat(1)));
  MPoly prod_all(Rat(1));
  for (size_t i = 0; i < k; ++i) {
    for (size_t l = 0; l < k; ++l)
      if (l != i) prod_except[i] = prod_except[i] * factors[l];
    prod_all = prod_all * factors[i];
  }
  std::vector<MPoly> eqs;
  for (size_t j = 0; j < vars.size(); ++j) {
    MPoly e = MPoly::var(nu_names[j]) * prod_all;
    for (size_t i = 0; i < k; ++i)
      e = e + MPoly::var(mu_names[i]) * MPoly::var(vars[j]) * factors[i].derivative(vars[j]) *
                  prod_except[i];
    eqs.push_back(std::move(e));
  }
  return eqs;
}

EulerCharEngine::EulerCharEngine(std::vector<MPoly> factors, std::vector<std::string> vars,
                                 std::vector<std::string> params, EulerCharConfig cfg)
    : factors_(std::move(factors)),
      vars_(std::move(vars)),
      params_(std::move(params)),
      cfg_(cfg),
      rng_(cfg.seed) {
  if (factors_.empty()) throw Error("euler: no factors");
  for (const MPoly& f : factors_)
    if (f.is_zero()) throw Error("euler: zero factor");
  mu_count_ = static_cast<int>(factors_.size());
  std::set<std::string> taken(vars_.begin(), vars_.end());
  taken.insert(params_.begin(), params_.end());
  auto fresh = [&](std::string base) {
    while (taken.count(base)) base += "_";
    taken.insert(base);
    return base;
  };
  std::vector<std::string> mu, nu;
  for (size_t i = 0; i < factors_.size(); ++i) mu.push_back(fresh("mu" + std::to_string(i + 1)));
  for (size_t j = 0; j < vars_.size(); ++j) nu.push_back(fresh("nu" + std::to_string(j + 1)));
  std::vector<MPoly> eqs = critical_equations(factors_, vars_, mu, nu);
  std::vector<std::string> full = params_;
  full.insert(full.end(), mu.begin(), mu.end());
  full.insert(full.end(), nu.begin(), nu.end());
  sys_ = std::make_unique<CompiledSystem>(eqs, vars_, full);
  fsys_ = std::make_unique<CompiledSystem>(factors_, vars_, params_);
}

bool EulerCharEngine::torus_ok(const std::vector<cdouble>& x,
                               const std::vector<cdouble>& zvals) const {
  double xscale = std::max(1.0, max_norm(x));
  for (const auto& c : x)
    if (std::abs(c) < kTorusTol * xscale) return false;
  std::vector<cdouble> fv(fsys_->size());
  fsys_->eval(x.data(), zvals.data(), fv.data());
  for (int i = 0; i < fsys_->size(); ++i) {
    double s = std::max(1.0, fsys_->scale(i, x.data(), zvals.data()));
    if (std::abs(fv[i]) < kTorusTol * s) return false;
  }
  return true;
}

void EulerCharEngine::ensure_master() {
  if (master_ready_) return;
  master_params_.resize(sys_->param_count());
  for (auto& v : master_params_) v = rng_.cgauss();
  // The factors must cut a proper hypersurface: a vanishing factor at a
  // random torus point signals a degenerate input.
  {
    std::vector<cdouble> probe(vars_.size());
    for (auto& c : probe) c = rng_.unit() * (1.0 + rng_.uniform());
    std::vector<cdouble> zvals(master_params_.begin(), master_params_.begin() + params_.size());
    std::vector<cdouble> fv(fsys_->size());
    fsys_->eval(probe.data(), zvals.data(), fv.data());
    for (int i = 0; i < fsys_->size(); ++i) {
      double s = fsys_->scale(i, probe.data(), zvals.data());
      if (std::abs(fv[i]) <= 1e-12 * std::max(1.0, s))
        throw Error("euler: factor vanishes at a random torus point");
    }
  }
  TrackerConfig tc = cfg_.tracker;
  tc.seed = cfg_.seed;
  std::vector<TrackedPoint> pts = solve_total_degree(*sys_, master_params_, tc, rng_);
  std::vector<cdouble> zvals(master_params_.begin(), master_params_.begin() + params_.size());
  for (auto& tp : pts)
    if (torus_ok(tp.coords, zvals)) master_points_.push_back(std::move(tp.coords));
  master_ready_ = true;
}

int EulerCharEngine::trial_count(const std::vector<cdouble>& target, bool* degenerate) {
  const int count = static_cast<int>(master_points_.size());
  std::vector<TrackedPoint> landing(count);
  parallel_for(count, cfg_.tracker.threads, [&](int i) {
    landing[i] = track_parameter(*sys_, master_params_, target, master_points_[i], cfg_.tracker);
  });
  std::vector<cdouble> zvals(target.begin(), target.begin() + params_.size());
  std::vector<std::vector<cdouble>> kept;
  bool bad = false;
  for (auto& tp : landing) {
    if (tp.status == PointStatus::failed) bad = true;
    if (tp.regular() && torus_ok(tp.coords, zvals)) kept.push_back(std::move(tp.coords));
  }
  *degenerate = bad;
  return static_cast<int>(cluster_points(kept, kClusterTol).size());
}

int EulerCharEngine::chi_generic() {
  ensure_master();
  return static_cast<int>(cluster_points(master_points_, kClusterTol).size());
}

int EulerCharEngine::chi_at(const std::map<std::string, cdouble>& param_values) {
  ensure_master();
  for (const auto& [name, value] : param_values) {
    (void)value;
    if (std::find(params_.begin(), params_.end(), name) == params_.end())
      throw Error("euler: unknown parameter '" + name + "'");
  }
  std::vector<cdouble> target = master_params_;
  for (size_t i = 0; i < params_.size(); ++i) {
    auto it = param_values.find(params_[i]);
    if (it == param_values.end()) throw Error("euler: missing value for '" + params_[i] + "'");
    target[i] = it->second;
  }
  if (master_points_.empty()) return 0;
  int best = -1;
  bool all_degenerate = true;
  for (int trial = 0; trial < std::max(1, cfg_.trials); ++trial) {
    for (size_t i = params_.size(); i < target.size(); ++i) target[i] = rng_.cgauss();
    bool degenerate = false;
    int count = trial_count(target, &degenerate);
    if (!degenerate) all_degenerate = false;
    best = std::max(best, count);
  }
  if (all_degenerate) throw Error("euler: indeterminate (all trials had failed paths)");
  return best;
}

int euler_characteristic(const std::vector<MPoly>& factors,
                         const std::map<std::string, cdouble>& param_values,
                         const std::vector<std::string>& vars, const EulerCharConfig& cfg) {
  std::set<std::string> vs(vars.begin(), vars.end());
  std::set<std::string> ps;
  for (const MPoly& f : factors)
    for (const auto& v : f.vars())
      if (!vs.count(v)) ps.insert(v);
  for (const auto& [name, value] : param_values) {
    (void)value;
    ps.insert(name);
  }
  EulerCharEngine engine(factors, vars, std::vector<std::string>(ps.begin(), ps.end()), cfg);
  return engine.chi_at(param_values);
}

int euler_characteristic(const MPoly& f, const std::map<std::string, cdouble>& param_values,
                         const std::vector<std::string>& vars, const EulerCharConfig& cfg) {
  return euler_characteristic(std::vector<MPoly>{f}, param_values, vars, cfg);
}

}  // namespace pld

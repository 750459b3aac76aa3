#include "pld/elim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "pld/rational.hpp"

namespace pld {
namespace {

using Eigen::MatrixXcd;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fresh_name(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  taken.insert(base);
  return base;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

cdouble cpow(cdouble b, int e) {
  cdouble r(1.0, 0.0);
  while (e-- > 0) r *= b;
  return r;
}

double vec_mag(const std::vector<cdouble>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

std::string join_longs(const std::vector<long>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

// |p(at)| together with the magnitude p would typically take at the sample's
// radius: sum over terms of |coefficient| * r^(term degree) with
// r = max(1, largest coordinate).  Scaling at the radius rather than at the
// point itself keeps the relative test meaningful for samples on coordinate
// hyperplanes, where the terms themselves vanish.
struct EvalAbs {
  cdouble value{0.0, 0.0};
  double scale = 0.0;
};
EvalAbs eval_abs(const MPoly& p, const std::map<std::string, cdouble>& at) {
  EvalAbs r;
  const auto& vars = p.vars();
  std::vector<cdouble> vals(vars.size());
  double radius = 1.0;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = at.find(vars[i]);
    if (it == at.end()) throw Error("eval: no value for " + vars[i]);
    vals[i] = it->second;
    radius = std::max(radius, std::abs(vals[i]));
  }
  for (const auto& [exps, coef] : p.terms()) {
    cdouble t(coef.get_d(), 0.0);
    int deg = 0;
    for (size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) {
        t *= cpow(vals[i], exps[i]);
        deg += exps[i];
      }
    r.value += t;
    r.scale += std::abs(coef.get_d()) * std::pow(radius, deg);
  }
  return r;
}

// Number of monomials in s symbols of degree exactly d (homog) or at most d,
// saturating at cap + 1.
long basis_count(size_t s, long d, bool homog, long cap) {
  long n = homog ? static_cast<long>(s) - 1 + d : static_cast<long>(s) + d;
  long k = std::min<long>(d, n - d);
  if (k < 0) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) {
    __int128 t = static_cast<__int128>(r) * (n - k + i) / i;
    if (t > cap) return cap + 1;
    r = static_cast<long>(t);
  }
  return r;
}

void enum_monomials_rec(size_t pos, size_t s, long rem, bool exact, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (pos == s) {
    if (!exact || rem == 0) out.push_back(cur);
    return;
  }
  for (long e = 0; e <= rem; ++e) {
    cur[pos] = static_cast<int>(e);
    enum_monomials_rec(pos + 1, s, rem - e, exact, cur, out);
  }
  cur[pos] = 0;
}

std::vector<std::vector<int>> enum_monomials(size_t s, long d, bool exact) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s, 0);
  enum_monomials_rec(0, s, d, exact, cur, out);
  return out;
}

// --------------------------------------------------------- structural prep

struct ReducedSystem {
  std::vector<MPoly> eqs;          // nonzero equations
  std::vector<std::string> vars;   // auxiliary and unused variables dropped
  std::vector<std::string> torus;  // variables forced nonzero by dropped equations
};

// An equation of the form c * monomial(vars) * v + d with constant nonzero d,
// where v appears in no other equation, pins v = -d / (c * monomial) and adds
// nothing beyond keeping the monomial's variables away from zero.  Dropping
// the pair (equation, v) and remembering the nonzero constraint is an exact
// simplification; it strips the torus equation of an incidence system.
// Variables absent from every remaining equation are dropped as well: their
// fibers are full affine lines, so the parameter-space projection is
// unchanged.
ReducedSystem structural_reduce(std::vector<MPoly> eqs, std::vector<std::string> vars) {
  ReducedSystem red;
  eqs.erase(std::remove_if(eqs.begin(), eqs.end(), [](const MPoly& f) { return f.is_zero(); }),
            eqs.end());
  std::set<std::string> torus;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto vit = vars.begin(); vit != vars.end() && !changed; ++vit) {
      const std::string& v = *vit;
      size_t holder = eqs.size();
      size_t uses = 0;
      for (size_t i = 0; i < eqs.size(); ++i)
        if (eqs[i].depends_on(v)) {
          ++uses;
          holder = i;
        }
      if (uses != 1 || eqs[holder].degree_in(v) != 1) continue;
      MPoly lin = eqs[holder].coeff_in(v, 1);
      MPoly rest = eqs[holder].coeff_in(v, 0);
      if (!lin.is_monomial() || !rest.is_constant() || rest.is_zero()) continue;
      for (const auto& mv : lin.vars())
        if (std::find(vars.begin(), vars.end(), mv) != vars.end()) torus.insert(mv);
      eqs.erase(eqs.begin() + holder);
      vars.erase(vit);
      changed = true;
    }
  }
  // drop variables no equation mentions
  std::vector<std::string> live;
  for (const auto& v : vars) {
    bool used = false;
    for (const auto& f : eqs) used = used || f.depends_on(v);
    if (used) live.push_back(v);
  }
  red.eqs = std::move(eqs);
  red.vars = std::move(live);
  for (const auto& v : red.vars)
    if (torus.count(v)) red.torus.push_back(v);
  return red;
}

// --------------------------------------------------------- sliced systems

// A level of the slicing ladder: parameters restricted to a symbolic line
// z_j = a_j + t b_j, the last k variables eliminated through generic affine
// hyperplanes with unit pivot coefficients, and the equations squared up by
// fixed random integer combinations.
struct LineSystems {
  CompiledSystem sq;    // square system: n_live + 1 equations and unknowns
  CompiledSystem full;  // all substituted equations, for junk filtering
  std::vector<std::string> unknowns;    // live variables ..., then t
  std::vector<std::string> sys_params;  // a1, b1, a2, b2, ..., hyperplane coefficients
  std::vector<MPoly> var_exprs;         // original variables in terms of the unknowns
  int n_live = 0;
  int k = 0;
};

LineSystems build_line_systems(const std::vector<MPoly>& eqs, const std::vector<std::string>& vars,
                               const std::vector<std::string>& params, int k, Rng& rng) {
  std::set<std::string> taken(vars.begin(), vars.end());
  for (const auto& p : params) taken.insert(p);
  const int n = static_cast<int>(vars.size());
  const int n_live = n - k;

  const std::string tname = fresh_name("t", taken);
  std::vector<std::string> unknowns(vars.begin(), vars.begin() + n_live);
  unknowns.push_back(tname);

  std::map<std::string, MPoly> repl;
  std::vector<std::string> sys_params;
  const MPoly T = MPoly::var(tname);
  for (size_t j = 0; j < params.size(); ++j) {
    std::string an = fresh_name("a" + std::to_string(j + 1), taken);
    std::string bn = fresh_name("b" + std::to_string(j + 1), taken);
    sys_params.push_back(an);
    sys_params.push_back(bn);
    repl[params[j]] = MPoly::var(an) + T * MPoly::var(bn);
  }
  for (int j = 0; j < k; ++j) {
    std::string c0 = fresh_name("h" + std::to_string(j + 1) + "c0", taken);
    sys_params.push_back(c0);
    MPoly expr = -MPoly::var(c0);
    for (int i = 0; i < n_live; ++i) {
      std::string ci = fresh_name("h" + std::to_string(j + 1) + "c" + std::to_string(i + 1), taken);
      sys_params.push_back(ci);
      expr -= MPoly::var(ci) * MPoly::var(vars[i]);
    }
    repl[vars[n_live + j]] = expr;
  }

  std::vector<MPoly> subst;
  subst.reserve(eqs.size());
  for (const auto& f : eqs) subst.push_back(f.subst(repl));

  std::vector<MPoly> var_exprs;
  for (int i = 0; i < n; ++i)
    var_exprs.push_back(i < n_live ? MPoly::var(vars[i]) : repl.at(vars[i]));

  const int rows = n_live + 1;
  std::vector<MPoly> sq;
  if (static_cast<int>(subst.size()) == rows) {
    sq = subst;
  } else {
    for (int q = 0; q < rows; ++q) {
      MPoly row;
      int guard = 0;
      do {
        row = MPoly();
        for (const auto& f : subst) {
          long r = static_cast<long>(rng.raw() % 1999) - 999;
          if (r == 0) r = 7;
          row += f * Rat(r);
        }
      } while (row.is_zero() && ++guard < 5);
      sq.push_back(std::move(row));
    }
  }

  return LineSystems{CompiledSystem(sq, unknowns, sys_params),
                     CompiledSystem(subst, unknowns, sys_params),
                     std::move(unknowns),
                     std::move(sys_params),
                     std::move(var_exprs),
                     n_live,
                     k};
}

// --------------------------------------------------------- face projector

struct InterpOutcome {
  ProjComponent comp;
  bool settled = false;  // true: interpolated or legitimately degree-only
};

class FaceProjector {
 public:
  FaceProjector(ReducedSystem red, std::vector<std::string> params, bool homogeneous,
                const ElimConfig& cfg, Rng& rng)
      : eqs_(std::move(red.eqs)),
        vars_(std::move(red.vars)),
        torus_(std::move(red.torus)),
        params_(std::move(params)),
        homog_(homogeneous),
        cfg_(cfg),
        rng_(rng),
        orig_(eqs_, cat(vars_, params_), {}) {
    for (const auto& tv : torus_)
      torus_idx_.push_back(
          std::find(vars_.begin(), vars_.end(), tv) - vars_.begin());
  }

  ProjectionResult run(int min_hyperplanes) {
    ProjectionResult out;
    const int n = static_cast<int>(vars_.size());
    const int m = static_cast<int>(eqs_.size());
    int k0 = std::max(min_hyperplanes, n + 1 - m);
    if (k0 < 0) k0 = 0;
    bool pending = true;
    for (int k = k0; k <= n && pending; ++k) {
      LineSystems L = build_line_systems(eqs_, vars_, params_, k, rng_);
      std::vector<cdouble> pv(L.sys_params.size());
      for (auto& c : pv) c = rng_.cgauss();

      SolveStats st;
      std::vector<TrackedPoint> singular;
      std::vector<TrackedPoint> ends = solve_total_degree(L.sq, pv, tracker(), rng_, &st, &singular);
      out.failed_paths += st.failed;

      pending = false;
      for (const auto& sp : singular)
        if (L.full.residual(sp.coords, pv) < 1e-6) {
          pending = true;
          break;
        }

      std::vector<TrackedPoint> witnesses;
      for (auto& tp : ends)
        if (admissible(L, tp.coords, pv)) witnesses.push_back(std::move(tp));
      if (!witnesses.empty()) process_level(L, pv, witnesses, out);
    }
    out.ladder_exhausted = pending;
    return out;
  }

 private:
  static std::vector<std::string> cat(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::vector<std::string> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  }

  TrackerConfig tracker() const {
    TrackerConfig tc = cfg_.tracker;
    tc.threads = cfg_.threads;
    return tc;
  }

  // Original-variable and parameter values behind a sliced solution.
  void recover(const LineSystems& L, const std::vector<cdouble>& x, const std::vector<cdouble>& pv,
               std::vector<cdouble>& var_vals, std::vector<cdouble>& z_vals) const {
    std::map<std::string, cdouble> at;
    for (size_t i = 0; i < L.unknowns.size(); ++i) at[L.unknowns[i]] = x[i];
    for (size_t i = 0; i < L.sys_params.size(); ++i) at[L.sys_params[i]] = pv[i];
    var_vals.clear();
    for (const auto& e : L.var_exprs) var_vals.push_back(e.eval(at));
    const cdouble t = x[L.n_live];
    z_vals.clear();
    for (size_t j = 0; j < params_.size(); ++j) z_vals.push_back(pv[2 * j] + t * pv[2 * j + 1]);
  }

  bool torus_ok(const std::vector<cdouble>& var_vals) const {
    if (torus_idx_.empty()) return true;
    const double scale = std::max(1.0, vec_mag(var_vals));
    for (long i : torus_idx_)
      if (std::abs(var_vals[i]) <= cfg_.torus_tol * scale) return false;
    return true;
  }

  // Codimension of the parameter-space projection of the tangent space at a
  // smooth point: rank J - rank J_vars, where J is the Jacobian of the
  // original equations in all coordinates (variables, then parameters).
  int tangent_codim(const std::vector<cdouble>& var_vals,
                    const std::vector<cdouble>& z_vals) const {
    std::vector<cdouble> point = var_vals;
    point.insert(point.end(), z_vals.begin(), z_vals.end());
    MatrixXcd J;
    orig_.jac_x(point.data(), nullptr, J);
    Eigen::JacobiSVD<MatrixXcd> full(J);
    const double tau = 1e-8 * (full.singularValues().size() ? full.singularValues()(0) : 0.0);
    if (tau == 0.0) return 0;
    auto rank_of = [&](const Eigen::JacobiSVD<MatrixXcd>& svd) {
      int r = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tau) ++r;
      return r;
    };
    Eigen::JacobiSVD<MatrixXcd> vars_only(J.leftCols(static_cast<int>(vars_.size())));
    return rank_of(full) - rank_of(vars_only);
  }

  bool admissible(const LineSystems& L, const std::vector<cdouble>& x,
                  const std::vector<cdouble>& pv) const {
    if (L.full.residual(x, pv) > cfg_.junk_tol) return false;
    std::vector<cdouble> var_vals, z_vals;
    recover(L, x, pv, var_vals, z_vals);
    if (!torus_ok(var_vals)) return false;
    return tangent_codim(var_vals, z_vals) == 1;
  }

  void process_level(const LineSystems& L, const std::vector<cdouble>& pv,
                     const std::vector<TrackedPoint>& witnesses, ProjectionResult& out) {
    int stab = cfg_.stabilization;
    int loops = cfg_.max_loops;
    std::vector<std::vector<cdouble>> seeds;
    for (const auto& w : witnesses) seeds.push_back(w.coords);

    std::vector<ProjComponent> best;
    for (int attempt = 0; attempt <= cfg_.interp_retries; ++attempt) {
      MonodromyResult mres = monodromy_solve(L.sq, pv, seeds, tracker(), rng_, stab, loops);
      std::vector<std::vector<int>> orbits;
      for (const auto& orb : mres.orbits) {
        std::vector<int> keep;
        for (int idx : orb)
          if (admissible(L, mres.points[idx].coords, pv)) keep.push_back(idx);
        if (!keep.empty()) orbits.push_back(std::move(keep));
      }
      std::vector<ProjComponent> comps;
      bool all_settled = true;
      for (const auto& orb : orbits) {
        InterpOutcome oc = interpolate_component(L, pv, mres.points, orb, attempt);
        all_settled = all_settled && oc.settled;
        comps.push_back(std::move(oc.comp));
      }
      best = std::move(comps);
      if (all_settled || attempt == cfg_.interp_retries) break;
      stab += 4;
      loops += 25;
      seeds.clear();
      for (const auto& p : mres.points) seeds.push_back(p.coords);
    }
    for (auto& c : best) out.components.push_back(std::move(c));
  }

  // Distinct t-values among a set of sliced solutions; representatives first.
  static std::vector<cdouble> t_clusters(const std::vector<const TrackedPoint*>& pts, int tidx) {
    std::vector<std::vector<cdouble>> ts;
    ts.reserve(pts.size());
    for (const auto* p : pts) ts.push_back({p->coords[tidx]});
    std::vector<cdouble> reps;
    for (int r : cluster_points(ts, 1e-6)) reps.push_back(ts[r][0]);
    return reps;
  }

  InterpOutcome interpolate_component(const LineSystems& L, const std::vector<cdouble>& pv,
                                      const std::vector<TrackedPoint>& pts,
                                      const std::vector<int>& orbit, int attempt) {
    const size_t s = params_.size();
    const int tidx = L.n_live;

    InterpOutcome oc;
    ProjComponent& comp = oc.comp;
    comp.witness.hyperplanes = L.k;
    for (int i : orbit) comp.witness.points.push_back(pts[i]);
    for (size_t j = 0; j < s; ++j) {
      comp.witness.line_a.push_back(pv[2 * j]);
      comp.witness.line_b.push_back(pv[2 * j + 1]);
    }
    comp.witness.slice.assign(pv.begin() + 2 * s, pv.end());

    std::vector<const TrackedPoint*> members;
    for (int i : orbit) members.push_back(&pts[i]);
    std::vector<cdouble> base_ts = t_clusters(members, tidx);
    long d = static_cast<long>(base_ts.size());
    comp.degree = d;

    const bool homog_basis = homog_ && attempt < 2;  // late retries widen the basis
    long M = basis_count(s, d, homog_basis, cfg_.max_samples + 1);
    if (M < 2) return oc;  // basis too small to carry a null vector; retry wider

    std::vector<std::vector<cdouble>> samples;
    auto push_sample = [&](const std::vector<cdouble>& pvals, cdouble t) {
      std::vector<cdouble> z(s);
      for (size_t j = 0; j < s; ++j) z[j] = pvals[2 * j] + t * pvals[2 * j + 1];
      samples.push_back(std::move(z));
    };
    for (cdouble t : base_ts) push_sample(pv, t);

    if (M - 1 > cfg_.max_samples) {
      comp.witness.samples = samples;
      oc.settled = true;  // reported degree-only by design, not by failure
      return oc;
    }

    long target = M + 4 + 20;
    long line_tries = 0;
    while (static_cast<long>(samples.size()) < target) {
      if (++line_tries > 2 * (target / std::max<long>(1, d)) + 20) break;
      std::vector<cdouble> pnew = pv;
      for (size_t j = 0; j < 2 * s; ++j) pnew[j] = rng_.cgauss();

      std::vector<TrackedPoint> moved(members.size());
      TrackerConfig tc = tracker();
      parallel_for(static_cast<int>(members.size()), cfg_.threads, [&](int i) {
        moved[i] = track_parameter(L.sq, pv, pnew, members[i]->coords, tc);
      });
      std::vector<const TrackedPoint*> good;
      for (const auto& mp : moved)
        if (mp.status == PointStatus::regular && L.full.residual(mp.coords, pnew) <= cfg_.junk_tol)
          good.push_back(&mp);
      if (good.empty()) continue;
      std::vector<cdouble> ts = t_clusters(good, tidx);
      if (static_cast<long>(ts.size()) > d) {
        // the base slice under-counted the component's line intersections
        d = static_cast<long>(ts.size());
        comp.degree = d;
        M = basis_count(s, d, homog_basis, cfg_.max_samples + 1);
        if (M - 1 > cfg_.max_samples) {
          comp.witness.samples = samples;
          oc.settled = true;
          return oc;
        }
        target = M + 4 + 20;
      }
      for (cdouble t : ts) push_sample(pnew, t);
    }

    comp.witness.samples = samples;
    if (static_cast<long>(samples.size()) < M + 20) return oc;  // not settled: retry

    const long rows = static_cast<long>(samples.size()) - 20;
    std::vector<std::vector<int>> monos = enum_monomials(s, d, homog_basis);
    MatrixXcd A(rows, M);
    std::vector<std::vector<cdouble>> pows(s);
    for (long r = 0; r < rows; ++r) {
      const auto& z = samples[r];
      for (size_t j = 0; j < s; ++j) {
        pows[j].assign(d + 1, cdouble(1.0, 0.0));
        for (long e = 1; e <= d; ++e) pows[j][e] = pows[j][e - 1] * z[j];
      }
      double row_max = 0.0;
      for (long c = 0; c < M; ++c) {
        cdouble val(1.0, 0.0);
        for (size_t j = 0; j < s; ++j)
          if (monos[c][j]) val *= pows[j][monos[c][j]];
        A(r, c) = val;
        row_max = std::max(row_max, std::abs(val));
      }
      if (row_max > 0) A.row(r) /= row_max;
    }
    Eigen::BDCSVD<MatrixXcd> svd(A, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(M - 1);
    comp.gap = smin > 0 ? sv(M - 2) / smin : kInf;

    Eigen::VectorXcd nullvec = svd.matrixV().col(M - 1);
    int imax = 0;
    for (int i = 1; i < M; ++i)
      if (std::abs(nullvec(i)) > std::abs(nullvec(imax))) imax = i;
    nullvec /= nullvec(imax);

    MPoly delta;
    for (long c = 0; c < M; ++c) {
      const cdouble cv = nullvec(c);
      if (std::abs(cv.imag()) > 1e-6 * std::max(1.0, std::abs(cv.real()))) return oc;
      Rat r = rationalize(cv.real(), cfg_.rationalize_tol);
      if (r == 0) continue;
      MPoly term(r);
      for (size_t j = 0; j < s; ++j)
        if (monos[c][j]) term *= MPoly::var(params_[j], monos[c][j]);
      delta += term;
    }
    if (delta.is_zero() || delta.is_constant()) return oc;
    delta = sqfree_part(delta);

    for (const auto& z : samples) {
      std::map<std::string, cdouble> at;
      for (size_t j = 0; j < s; ++j) at[params_[j]] = z[j];
      EvalAbs ev = eval_abs(delta, at);
      if (std::abs(ev.value) > 1e-8 * std::max(ev.scale, 1e-300)) return oc;
    }

    comp.delta = std::move(delta);
    comp.interpolated = true;
    comp.trusted = comp.gap >= cfg_.gap_threshold;
    oc.settled = true;
    return oc;
  }

  std::vector<MPoly> eqs_;
  std::vector<std::string> vars_;
  std::vector<std::string> torus_;
  std::vector<std::string> params_;
  std::vector<long> torus_idx_;
  bool homog_;
  const ElimConfig& cfg_;
  Rng& rng_;
  CompiledSystem orig_;  // original equations over (variables, parameters)
};

// --------------------------------------------------------- chi sampling

// A parameter point on the zero set of cand: solve for one parameter after
// randomizing the others, walking through charts and roots until a chi query
// succeeds.  Returns the smallest chi seen among the roots of the first
// workable chart, so reducible candidates report their most degenerate sheet.
std::optional<long> chi_on_zero_set(EulerCharEngine& engine, const MPoly& cand, Rng& rng,
                                    std::string* note) {
  const auto& params = engine.params();
  for (const auto& v : cand.vars())
    if (std::find(params.begin(), params.end(), v) == params.end()) {
      if (note) *note = "candidate uses unknown symbol " + v;
      return std::nullopt;
    }
  const std::vector<std::string>& charts = cand.vars();
  if (charts.empty()) {
    if (note) *note = "candidate has no parameter dependence";
    return std::nullopt;
  }
  for (const auto& v : charts) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::map<std::string, cdouble> at;
      for (const auto& p : params)
        if (p != v) at[p] = rng.cgauss();
      const int dv = cand.degree_in(v);
      std::vector<cdouble> coeffs(dv + 1);
      double cmax = 0.0;
      for (int k = 0; k <= dv; ++k) {
        coeffs[k] = cand.coeff_in(v, k).eval(at);
        cmax = std::max(cmax, std::abs(coeffs[k]));
      }
      if (cmax < 1e-12) continue;
      std::vector<cdouble> roots = polynomial_roots(coeffs);
      if (roots.empty()) continue;
      long best = -1;
      int tried = 0;
      for (const cdouble& r : roots) {
        if (++tried > 4) break;
        at[v] = r;
        try {
          long chi = engine.chi_at(at);
          best = best < 0 ? chi : std::min(best, chi);
        } catch (const Error&) {
          if (note && note->empty()) *note = "degenerate sample skipped";
        }
      }
      if (best >= 0) return best;
    }
    if (note) *note = "chart " + v + " degenerate, resampled";
  }
  if (note) *note = "all charts degenerate";
  return std::nullopt;
}

// --------------------------------------------------------- face scan

struct FoundComponent {
  MPoly delta;  // zero when unresolved
  long degree = 0;
  double gap = 0.0;
  bool trusted = false;
  std::string method;
};

struct FaceOutcome {
  FaceReport report;
  std::vector<FoundComponent> found;
};

// Pull single-symbol parameter factors off a square-free polynomial.
std::vector<MPoly> split_obvious(MPoly p, const std::vector<std::string>& params) {
  std::vector<MPoly> out;
  for (const auto& v : params) {
    if (p.min_degree_in(v) >= 1) {
      out.push_back(MPoly::var(v));
      MPoly q;
      if (try_divide(p, MPoly::var(v), &q)) p = q;
    }
  }
  if (!p.is_constant()) out.push_back(p.normalized());
  return out;
}

FaceOutcome scan_face(const MPoly& p, const FaceDescriptor& face, long ordinal, long total,
                      const std::vector<std::string>& params, const std::vector<std::string>& vars,
                      bool homogeneous, const ElimConfig& cfg) {
  FaceOutcome oc;
  FaceReport& rep = oc.report;
  rep.face = face;
  rep.ordinal = ordinal;
  rep.total = total;

  try {
    MPoly fw = initial_form(p, vars, face.weight);

    // Single support point in the variables: the coefficient polynomial is
    // the whole projection (on the torus the monomial never vanishes).
    bool single_support = true;
    for (const auto& v : vars)
      single_support = single_support && fw.degree_in(v) == fw.min_degree_in(v);
    if (single_support) {
      std::map<std::string, MPoly> ones;
      for (const auto& v : vars) ones[v] = MPoly(1);
      MPoly c = fw.subst(ones);
      if (!c.is_constant()) {
        for (MPoly& piece : split_obvious(sqfree_part(c), params)) {
          FoundComponent fc;
          fc.degree = piece.total_degree();
          fc.gap = kInf;
          fc.trusted = true;
          fc.method = "sym";
          fc.delta = std::move(piece);
          rep.deltas.push_back(fc.delta);
          oc.found.push_back(std::move(fc));
        }
        rep.methods = {"sym"};
      }
      rep.status = FaceStatus::done;
      return oc;
    }

    IncidenceSystem inc = build_incidence(fw, face, vars, params);

    const bool want_sym =
        cfg.method == ElimMethod::sym ||
        (cfg.method == ElimMethod::automatic &&
         fw.term_count() <= static_cast<size_t>(cfg.sym_term_limit));
    if (want_sym) {
      std::vector<MPoly> gens;  // vanished partials carry nothing
      for (const auto& f : inc.equations)
        if (!f.is_zero()) gens.push_back(f);
      EliminationResult er = groebner_eliminate(gens, inc.vars, cfg.budget);
      if (er.status == ElimStatus::ok) {
        MPoly dd = ideal_codim1_part(er.generators);
        if (!dd.is_zero()) {
          for (MPoly& piece : split_obvious(dd, params)) {
            FoundComponent fc;
            fc.degree = piece.total_degree();
            fc.gap = kInf;
            fc.trusted = true;
            fc.method = "sym";
            fc.delta = std::move(piece);
            rep.deltas.push_back(fc.delta);
            oc.found.push_back(std::move(fc));
          }
        }
        rep.methods = {"sym"};
        rep.status = FaceStatus::done;
        return oc;
      }
      // zero elimination ideal (a dominant component) or a blown budget:
      // continue on the numerical path
    }

    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(ordinal)));
    // The weight scales the initial form's variables by a one-parameter
    // torus action; when it acts nontrivially on a variable the form
    // depends on, every torus component has fibers of dimension at least
    // one and the slice-free level can be skipped.
    bool scaling = false;
    for (size_t i = 0; i < vars.size() && i < face.weight.size(); ++i)
      if (face.weight[i] != 0 && fw.depends_on(vars[i])) scaling = true;
    const int min_h = scaling ? 1 : 0;
    ProjectionResult pr =
        project_codim1(inc.equations, params, inc.vars, homogeneous, cfg, rng, min_h);
    rep.methods = {"num"};
    for (auto& c : pr.components) {
      FoundComponent fc;
      fc.degree = c.degree;
      fc.gap = c.gap;
      fc.trusted = c.trusted;
      fc.method = "num";
      if (c.interpolated) {
        fc.delta = c.delta;
        rep.deltas.push_back(fc.delta);
      } else {
        rep.status = FaceStatus::unresolved;
        rep.degrees.push_back(c.degree);
        rep.message += "component of degree " + std::to_string(c.degree) + " not interpolated; ";
      }
      oc.found.push_back(std::move(fc));
    }
    if (pr.ladder_exhausted) {
      rep.status = FaceStatus::unresolved;
      rep.message += "singular solutions remained at the hyperplane cap; ";
    }
    if (pr.failed_paths > 0)
      rep.message += std::to_string(pr.failed_paths) + " tracking failures; ";
  } catch (const Error& e) {
    rep.status = FaceStatus::error;
    rep.message = e.what();
    oc.found.clear();
  }
  return oc;
}

struct ScanResult {
  std::vector<DiscriminantComponent> components;
  std::vector<FaceReport> faces;
  bool complete = true;
};

void merge_found(std::vector<DiscriminantComponent>& components, const FaceOutcome& oc) {
  for (const auto& fc : oc.found) {
    if (fc.delta.is_zero()) continue;
    auto it = std::find_if(components.begin(), components.end(),
                           [&](const DiscriminantComponent& c) { return c.delta == fc.delta; });
    if (it == components.end()) {
      DiscriminantComponent c;
      c.delta = fc.delta;
      c.degree = fc.delta.total_degree();
      c.weights = {oc.report.face.weight};
      c.gap = fc.gap;
      c.methods = {fc.method};
      c.trusted = fc.trusted;
      components.push_back(std::move(c));
    } else {
      if (std::find(it->weights.begin(), it->weights.end(), oc.report.face.weight) ==
          it->weights.end())
        it->weights.push_back(oc.report.face.weight);
      if (std::find(it->methods.begin(), it->methods.end(), fc.method) == it->methods.end())
        it->methods.push_back(fc.method);
      it->gap = std::max(it->gap, fc.gap);
      it->trusted = it->trusted || fc.trusted;
    }
  }
}

// Symbolic faces report the square-free product of their components; divide
// out factors recognized as other components so every entry is a single one.
void cross_split(std::vector<DiscriminantComponent>& components) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < components.size() && !changed; ++i) {
      for (size_t j = 0; j < components.size() && !changed; ++j) {
        if (i == j) continue;
        const MPoly& d = components[j].delta;
        if (d.is_constant() || components[i].delta.total_degree() <= d.total_degree()) continue;
        MPoly q;
        if (!try_divide(components[i].delta, d, &q) || q.is_constant()) continue;
        for (const auto& w : components[i].weights)
          if (std::find(components[j].weights.begin(), components[j].weights.end(), w) ==
              components[j].weights.end())
            components[j].weights.push_back(w);
        for (const auto& m : components[i].methods)
          if (std::find(components[j].methods.begin(), components[j].methods.end(), m) ==
              components[j].methods.end())
            components[j].methods.push_back(m);
        components[i].delta = q.normalized();
        components[i].degree = components[i].delta.total_degree();
        changed = true;
      }
    }
  }
  // collapse duplicates the division may have created
  std::vector<DiscriminantComponent> out;
  for (auto& c : components) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DiscriminantComponent& o) { return o.delta == c.delta; });
    if (it == out.end()) {
      out.push_back(std::move(c));
      continue;
    }
    for (const auto& w : c.weights)
      if (std::find(it->weights.begin(), it->weights.end(), w) == it->weights.end())
        it->weights.push_back(w);
    for (const auto& m : c.methods)
      if (std::find(it->methods.begin(), it->methods.end(), m) == it->methods.end())
        it->methods.push_back(m);
    it->gap = std::max(it->gap, c.gap);
    it->trusted = it->trusted || c.trusted;
  }
  components = std::move(out);
}

ScanResult scan_faces(const MPoly& p, const std::vector<std::string>& params,
                      const std::vector<std::string>& vars, bool homogeneous,
                      const ElimConfig& cfg) {
  if (p.is_zero()) throw Error("face scan: zero polynomial");
  for (const auto& v : p.vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end() &&
        std::find(params.begin(), params.end(), v) == params.end())
      throw Error("face scan: symbol " + v + " is neither a variable nor a parameter");

  LatticePolytope np = newton_polytope(p, vars);
  std::vector<FaceDescriptor> faces = face_weights(np);
  std::stable_sort(faces.begin(), faces.end(),
                   [](const FaceDescriptor& a, const FaceDescriptor& b) { return a.codim > b.codim; });

  ScanResult out;
  const long total = static_cast<long>(faces.size());
  for (long i = 0; i < total; ++i) {
    const FaceDescriptor& face = faces[i];
    const long ordinal = i + 1;
    if (cfg.single_weight) {
      if (face.weight != *cfg.single_weight) continue;
    } else {
      if (cfg.codim_start >= 0 && face.codim > cfg.codim_start) continue;
      if (ordinal < cfg.face_start) continue;
      if (cfg.single_face && ordinal != cfg.face_start) continue;
    }

    FaceOutcome oc = scan_face(p, face, ordinal, total, params, vars, homogeneous, cfg);
    if (cfg.log) {
      std::ostringstream os;
      os << "codim: " << face.codim << ", face: " << ordinal << "/" << total << ", weights: ["
         << join_longs(face.weight) << "], discriminant: ";
      if (oc.found.empty()) {
        os << "1";
      } else {
        for (size_t k = 0; k < oc.found.size(); ++k)
          os << (k ? ", " : "") << (oc.found[k].delta.is_zero() ? std::string("unresolved (degree ") +
                                                                      std::to_string(oc.found[k].degree) + ")"
                                                                : oc.found[k].delta.str());
      }
      if (oc.report.status == FaceStatus::error) os << " [error: " << oc.report.message << "]";
      else if (oc.report.status == FaceStatus::unresolved) os << " [unresolved]";
      cfg.log(os.str());
    }
    merge_found(out.components, oc);
    if (oc.report.status == FaceStatus::unresolved || oc.report.status == FaceStatus::error)
      out.complete = false;
    out.faces.push_back(std::move(oc.report));
  }
  cross_split(out.components);
  return out;
}

bool relations_homogeneous(const std::map<std::string, MPoly>& relations) {
  for (const auto& [name, rhs] : relations) {
    (void)name;
    if (rhs.is_zero()) continue;
    if (rhs.total_degree() != 1) return false;
    MPoly c = rhs;
    for (const auto& v : rhs.vars()) c = c.coeff_in(v, 0);
    if (!c.is_zero()) return false;
  }
  return true;
}

}  // namespace

// --------------------------------------------------------- public interface

IncidenceSystem build_incidence(const MPoly& face_poly, const FaceDescriptor& face,
                                const std::vector<std::string>& vars,
                                const std::vector<std::string>& params) {
  if (!face.weight.empty() && face.weight.size() != vars.size())
    throw Error("incidence: weight length " + std::to_string(face.weight.size()) +
                " does not match " + std::to_string(vars.size()) + " variables");
  IncidenceSystem inc;
  inc.face = face;
  inc.params = params;
  inc.vars = vars;
  inc.equations.push_back(face_poly);
  MPoly prod(1);
  for (const auto& v : vars) {
    inc.equations.push_back(face_poly.derivative(v));
    prod *= MPoly::var(v);
  }
  std::set<std::string> taken(vars.begin(), vars.end());
  for (const auto& p : params) taken.insert(p);
  const std::string y = fresh_name("y", taken);
  inc.vars.push_back(y);
  inc.equations.push_back(MPoly::var(y) * prod - MPoly(1));
  return inc;
}

ProjectionResult project_codim1(const std::vector<MPoly>& equations,
                                const std::vector<std::string>& params,
                                const std::vector<std::string>& vars, bool homogeneous,
                                const ElimConfig& cfg, Rng& rng, int min_hyperplanes) {
  if (equations.empty()) throw Error("projection: no equations");
  if (params.empty()) throw Error("projection: no parameters");
  for (const auto& f : equations)
    for (const auto& v : f.vars())
      if (std::find(vars.begin(), vars.end(), v) == vars.end() &&
          std::find(params.begin(), params.end(), v) == params.end())
        throw Error("projection: symbol " + v + " is neither a variable nor a parameter");

  ReducedSystem red = structural_reduce(equations, vars);
  ProjectionResult out;
  if (red.eqs.empty()) {
    out.note = "all equations vanished structurally; the projection is dominant";
    return out;
  }
  if (red.vars.empty()) {
    // equations constrain the parameters alone: exact elimination
    MPoly g;
    for (const auto& f : red.eqs) g = gcd_poly(g, f);
    g = g.is_constant() ? MPoly() : sqfree_part(g);
    if (!g.is_zero()) {
      ProjComponent c;
      c.delta = std::move(g);
      c.degree = c.delta.total_degree();
      c.gap = kInf;
      c.interpolated = true;
      c.trusted = true;
      out.components.push_back(std::move(c));
    }
    return out;
  }
  FaceProjector fp(std::move(red), params, homogeneous, cfg, rng);
  return fp.run(std::max(0, min_hyperplanes));
}

PLDResult get_pld(const FeynmanGraph& g, const MassSpec& masses,
                  const std::map<std::string, MPoly>& relations, const ElimConfig& cfg) {
  SymanzikRep rep = symanzik(g, masses, relations);
  if (rep.params.empty())
    throw Error("pld: no free parameters remain on this subspace");

  PLDResult out;
  out.name = g.name;
  out.graph = g;
  out.U = rep.U;
  out.F = rep.F;
  out.G = rep.G;
  out.params = rep.params;
  out.vars = rep.alpha_vars;
  out.f_vector = f_vector(newton_polytope(rep.G, rep.alpha_vars));

  const bool homog = cfg.homogeneous.value_or(relations_homogeneous(relations));
  ScanResult scan = scan_faces(rep.G, rep.params, rep.alpha_vars, homog, cfg);
  out.components = std::move(scan.components);
  out.faces = std::move(scan.faces);
  out.complete = scan.complete;

  EulerCharConfig ecfg;
  ecfg.trials = cfg.chi_trials;
  ecfg.seed = cfg.seed;
  ecfg.tracker = cfg.tracker;
  ecfg.tracker.threads = cfg.threads;
  EulerCharEngine engine({rep.G}, rep.alpha_vars, rep.params, ecfg);
  out.chi_generic = engine.chi_generic();
  if (cfg.compute_chi) {
    Rng rng(mix_seed(cfg.seed, 0xC41));
    for (auto& comp : out.components) {
      std::string note;
      if (auto chi = chi_on_zero_set(engine, comp.delta, rng, &note)) comp.chi = *chi;
    }
  }
  return out;
}

SpecializedPAD specialized_pad(const MPoly& p, const std::vector<std::string>& params,
                               const std::vector<std::string>& vars, const ElimConfig& cfg) {
  const bool homog = cfg.homogeneous.value_or(false);
  ScanResult scan = scan_faces(p, params, vars, homog, cfg);
  SpecializedPAD out;
  out.components = std::move(scan.components);
  out.faces = std::move(scan.faces);
  out.complete = scan.complete;
  return out;
}

EulerDiscQResult euler_discriminant_q(const MPoly& gpoly, const std::vector<std::string>& params,
                                      const std::vector<std::string>& vars,
                                      const std::vector<MPoly>& candidates,
                                      const EulerCharConfig& cfg) {
  EulerCharEngine engine({gpoly}, vars, params, cfg);
  EulerDiscQResult out;
  out.chi_generic = engine.chi_generic();
  Rng rng(mix_seed(cfg.seed, 0xED15C));
  for (const auto& cand : candidates) {
    CandidateVerdict v;
    if (cand.is_zero() || cand.is_constant()) {
      v.note = "candidate is constant";
      out.verdicts.push_back(std::move(v));
      continue;
    }
    if (auto chi = chi_on_zero_set(engine, cand, rng, &v.note)) {
      v.chi = *chi;
      v.is_component = *chi < out.chi_generic;
    } else if (v.note.empty()) {
      v.note = "no usable sample on the zero set";
    }
    out.verdicts.push_back(std::move(v));
  }
  return out;
}

// --------------------------------------------------------- presentation

std::vector<MPoly> split_by_dictionary(const MPoly& p, const std::vector<MPoly>& dictionary) {
  std::vector<MPoly> out;
  if (p.is_zero() || p.is_constant()) return out;
  MPoly rest = p;
  bool progress = true;
  while (progress && !rest.is_constant()) {
    progress = false;
    for (const auto& d : dictionary) {
      if (d.is_constant() || d.is_zero()) continue;
      MPoly q;
      if (try_divide(rest, d, &q)) {
        out.push_back(d);
        rest = std::move(q);
        progress = true;
        break;
      }
    }
  }
  if (!rest.is_constant()) out.push_back(rest.normalized());
  return out;
}

std::vector<MPoly> threshold_dictionary(const std::vector<std::string>& channels,
                                        const std::vector<std::string>& masses, int max_subset) {
  std::vector<MPoly> out;
  const size_t n = masses.size();
  const int cap = std::min<int>(max_subset, static_cast<int>(n));
  for (const auto& c : channels) {
    const MPoly ch = MPoly::var(c);
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ULL << i)) idx.push_back(i);
      if (static_cast<int>(idx.size()) > cap) continue;
      const size_t rest = idx.size() - 1;  // first element keeps the + sign
      for (std::uint64_t signs = 0; signs < (1ULL << rest); ++signs) {
        MPoly sum = MPoly::var(masses[idx[0]]);
        for (size_t i = 0; i < rest; ++i) {
          MPoly m = MPoly::var(masses[idx[i + 1]]);
          sum = (signs & (1ULL << i)) ? sum - m : sum + m;
        }
        out.push_back(ch - sum * sum);
      }
    }
  }
  return out;
}

std::vector<MPoly> mass_split(const MPoly& delta,
                              const std::vector<std::pair<std::string, std::string>>& mass_of,
                              const std::vector<std::string>& channels) {
  std::map<std::string, MPoly> repl;
  std::vector<std::string> masses;
  for (const auto& [sq, m] : mass_of) {
    repl[sq] = MPoly::var(m, 2);
    masses.push_back(m);
  }
  const MPoly dm = delta.subst(repl);
  const std::vector<MPoly> dict = threshold_dictionary(channels, masses, 3);
  std::vector<MPoly> parts = split_by_dictionary(dm, dict);
  if (parts.size() <= 1) return {delta};
  return parts;
}

}  // namespace pld

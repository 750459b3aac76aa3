#include "pld/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pld {

namespace {

// Affine-coordinate change onto a saturated lattice basis of the affine hull.
struct Reduction {
  IVec base;                  // ambient base point
  std::vector<IVec> basis;    // d ambient vectors (lattice basis of the hull)
  std::vector<IVec> reduced;  // input points in basis coordinates
  int dim = 0;
};

Reduction reduce_points(const std::vector<IVec>& pts, const std::vector<int>& subset) {
  Reduction red;
  red.base = pts[subset[0]];
  const size_t n = red.base.size();
  IMat diffs;
  for (size_t k = 1; k < subset.size(); ++k) {
    IVec d(n);
    for (size_t i = 0; i < n; ++i) d[i] = pts[subset[k]][i] - red.base[i];
    diffs.push_back(std::move(d));
  }
  if (diffs.empty()) {
    red.dim = 0;
    red.reduced.assign(subset.size(), IVec{});
    return red;
  }
  std::vector<IVec> forms = integer_kernel(diffs);
  if (forms.empty()) {
    // full-dimensional: keep the ambient coordinates
    red.dim = static_cast<int>(n);
    for (size_t i = 0; i < n; ++i) {
      IVec e(n, 0);
      e[i] = 1;
      red.basis.push_back(std::move(e));
    }
    for (int id : subset) {
      IVec q(n);
      for (size_t i = 0; i < n; ++i) q[i] = pts[id][i] - red.base[i];
      red.reduced.push_back(std::move(q));
    }
    return red;
  }
  red.basis = integer_kernel(forms);  // saturated basis of the direction lattice
  red.dim = static_cast<int>(red.basis.size());
  // solve L q = p - base for each point (L columns are the basis vectors)
  IMat l(n, IVec(red.basis.size()));
  for (size_t c = 0; c < red.basis.size(); ++c)
    for (size_t r = 0; r < n; ++r) l[r][c] = red.basis[c][r];
  for (int id : subset) {
    IVec rhs(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = pts[id][i] - red.base[i];
    IVec q;
    if (!integer_solve(l, rhs, &q)) throw Error("polytope: non-lattice reduction");
    red.reduced.push_back(std::move(q));
  }
  return red;
}

QVec to_rat(const IVec& v) {
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

Rat dot(const QVec& a, const IVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

mpz_class idot(const IVec& a, const IVec& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IVec rat_to_primitive(const QVec& v) {
  mpz_class den = 1;
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  IVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(den);
    out[i] = scaled.get_num();
  }
  return primitive(std::move(out));
}

int affine_rank(const std::vector<IVec>& reduced, const std::vector<int>& local_ids) {
  if (local_ids.empty()) return 0;
  QMat diffs;
  const IVec& p0 = reduced[local_ids[0]];
  for (size_t k = 1; k < local_ids.size(); ++k) {
    QVec row(p0.size());
    for (size_t i = 0; i < p0.size(); ++i)
      row[i] = Rat(reduced[local_ids[k]][i] - p0[i]);
    diffs.push_back(std::move(row));
  }
  if (diffs.empty()) return 1;
  return rank_rat(diffs) + 1;
}

struct Facet {
  IVec normal;        // primitive inward normal in the parent's reduced coords
  mpz_class offset;   // min of <normal, q>
  std::vector<int> pts;  // global point ids on the facet, sorted
};

struct FaceHull {
  Reduction red;
  std::vector<Facet> facets;
};

struct HullContext {
  const std::vector<IVec>* points = nullptr;
  std::map<std::vector<int>, FaceHull> memo;

  const FaceHull& hull_of(const std::vector<int>& subset);
};

// Forms (in reduced coordinates) constant on the affine hull of the given
// local point ids: the rational kernel of the difference matrix.
std::vector<QVec> constant_forms(const std::vector<IVec>& reduced,
                                 const std::vector<int>& local_ids, int dim) {
  QMat diffs;
  const IVec& p0 = reduced[local_ids[0]];
  for (size_t k = 1; k < local_ids.size(); ++k) {
    QVec row(dim);
    for (int i = 0; i < dim; ++i) row[i] = Rat(reduced[local_ids[k]][i] - p0[i]);
    diffs.push_back(std::move(row));
  }
  if (diffs.empty()) {
    std::vector<QVec> all;
    for (int i = 0; i < dim; ++i) {
      QVec e(dim, Rat(0));
      e[i] = 1;
      all.push_back(std::move(e));
    }
    return all;
  }
  return nullspace_rat(diffs);
}

// Pick a form from the candidates that is independent of u.
QVec independent_form(const std::vector<QVec>& candidates, const QVec& u) {
  for (const auto& v : candidates) {
    QMat m = {u, v};
    if (rank_rat(m) == 2) return v;
  }
  throw Error("polytope: no independent supporting form");
}

// One pivot of the rotating-hyperplane step: given a supporting form (u, beta)
// exposing a face, rotate within the pencil spanned by u and v until the
// hyperplane hits the polytope again.  Returns the new supporting form.
std::pair<QVec, Rat> pivot(const std::vector<IVec>& reduced, const QVec& u, const Rat& beta,
                           const QVec& v, const Rat& gamma) {
  bool found = false;
  Rat best = 0;
  for (const auto& q : reduced) {
    Rat a = dot(u, q) - beta;
    if (a <= 0) continue;  // on the current face
    Rat b = dot(v, q) - gamma;
    Rat lam = -b / a;
    if (!found || lam > best) {
      best = lam;
      found = true;
    }
  }
  if (!found) throw Error("polytope: degenerate pivot");
  QVec w(u.size());
  for (size_t i = 0; i < u.size(); ++i) w[i] = best * u[i] + v[i];
  return {w, best * beta + gamma};
}

const FaceHull& HullContext::hull_of(const std::vector<int>& subset) {
  auto it = memo.find(subset);
  if (it != memo.end()) return it->second;
  FaceHull hull;
  hull.red = reduce_points(*points, subset);
  const int d = hull.red.dim;
  const auto& reduced = hull.red.reduced;
  const size_t m = subset.size();

  auto facet_from_normal = [&](IVec normal) {
    Facet f;
    f.normal = std::move(normal);
    bool first = true;
    for (size_t k = 0; k < m; ++k) {
      mpz_class val = idot(f.normal, reduced[k]);
      if (first || val < f.offset) {
        f.offset = val;
        first = false;
      }
    }
    for (size_t k = 0; k < m; ++k)
      if (idot(f.normal, reduced[k]) == f.offset) f.pts.push_back(subset[k]);
    return f;
  };

  if (d == 1) {
    hull.facets.push_back(facet_from_normal(IVec{1}));
    hull.facets.push_back(facet_from_normal(IVec{-1}));
  } else if (d >= 2) {
    // first facet: expose a face with e_1 and rotate until it has dimension d-1
    QVec u(d, Rat(0));
    u[0] = 1;
    Rat beta;
    auto exposed = [&](const QVec& uu, Rat* bb) {
      std::vector<int> face;
      Rat mn = 0;
      for (size_t k = 0; k < m; ++k) {
        Rat val = dot(uu, reduced[k]);
        if (k == 0 || val < mn) mn = val;
      }
      for (size_t k = 0; k < m; ++k)
        if (dot(uu, reduced[k]) == mn) face.push_back(static_cast<int>(k));
      *bb = mn;
      return face;
    };
    std::vector<int> face = exposed(u, &beta);
    while (affine_rank(reduced, face) - 1 < d - 1) {
      auto forms = constant_forms(reduced, face, d);
      QVec v = independent_form(forms, u);
      Rat gamma = dot(v, reduced[face[0]]);
      auto [nu, nb] = pivot(reduced, u, beta, v, gamma);
      u = std::move(nu);
      face = exposed(u, &beta);
    }
    Facet first = facet_from_normal(rat_to_primitive(u));

    // breadth-first search across ridges
    std::map<int, int> local;
    for (size_t k = 0; k < m; ++k) local[subset[k]] = static_cast<int>(k);
    std::set<std::vector<int>> seen;
    std::vector<Facet> queue = {first};
    seen.insert(first.pts);
    while (!queue.empty()) {
      Facet g = std::move(queue.back());
      queue.pop_back();
      const FaceHull& sub = hull_of(g.pts);  // ridge structure of the facet
      for (const Facet& ridge : sub.facets) {
        std::vector<int> ridge_local;
        for (int id : ridge.pts) ridge_local.push_back(local.at(id));
        QVec ug = to_rat(g.normal);
        Rat beta_g = Rat(g.offset);
        auto forms = constant_forms(reduced, ridge_local, d);
        QVec v = independent_form(forms, ug);
        Rat gamma = dot(v, reduced[ridge_local[0]]);
        // orient v to be positive on g away from the ridge
        std::set<int> ridge_set(ridge.pts.begin(), ridge.pts.end());
        for (int id : g.pts) {
          if (ridge_set.count(id)) continue;
          Rat b = dot(v, reduced[local.at(id)]) - gamma;
          if (b < 0) {
            for (auto& c : v) c = -c;
            gamma = -gamma;
          }
          break;
        }
        auto [nu, nb] = pivot(reduced, ug, beta_g, v, gamma);
        Facet h = facet_from_normal(rat_to_primitive(nu));
        if (seen.insert(h.pts).second) queue.push_back(h);
      }
      hull.facets.push_back(std::move(g));
    }
  }
  auto [pos, fresh] = memo.emplace(subset, std::move(hull));
  return pos->second;
}

std::vector<int> all_ids(size_t n) {
  std::vector<int> ids(n);
  for (size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
  return ids;
}

}  // namespace

LatticePolytope newton_polytope(const MPoly& f, const std::vector<std::string>& vars) {
  if (f.is_zero()) throw Error("polytope: Newton polytope of zero");
  LatticePolytope p;
  p.vars = vars;
  std::vector<int> positions(vars.size(), -1);
  const auto& fv = f.vars();
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = std::lower_bound(fv.begin(), fv.end(), vars[i]);
    if (it != fv.end() && *it == vars[i]) positions[i] = static_cast<int>(it - fv.begin());
  }
  std::set<IVec> support;
  for (const auto& [e, c] : f.terms()) {
    IVec pt(vars.size());
    for (size_t i = 0; i < vars.size(); ++i)
      pt[i] = positions[i] >= 0 ? e[positions[i]] : 0;
    support.insert(std::move(pt));
  }
  p.points.assign(support.begin(), support.end());
  Reduction red = reduce_points(p.points, all_ids(p.points.size()));
  p.dim = red.dim;
  return p;
}

std::vector<FaceDescriptor> face_weights(const LatticePolytope& p) {
  if (p.points.empty()) throw Error("polytope: empty polytope");
  const size_t n = p.vars.size();
  HullContext ctx;
  ctx.points = &p.points;
  std::vector<int> top = all_ids(p.points.size());
  const FaceHull& hull = ctx.hull_of(top);
  const int d = hull.red.dim;

  // face lattice: close the facet point sets under intersection
  std::set<std::vector<int>> sets;
  sets.insert(top);
  std::vector<std::vector<int>> work = {top};
  while (!work.empty()) {
    std::vector<int> s = std::move(work.back());
    work.pop_back();
    for (const Facet& f : hull.facets) {
      std::vector<int> inter;
      std::set_intersection(s.begin(), s.end(), f.pts.begin(), f.pts.end(),
                            std::back_inserter(inter));
      if (inter.empty() || inter == s) continue;
      if (sets.insert(inter).second) work.push_back(inter);
    }
  }

  // map weights from reduced to ambient coordinates
  IMat lt;  // d x n transpose of the basis matrix
  for (const auto& col : hull.red.basis) lt.push_back(col);
  bool identity = (d == static_cast<int>(n));

  std::vector<FaceDescriptor> faces;
  std::map<int, int> local;
  for (size_t k = 0; k < top.size(); ++k) local[top[k]] = static_cast<int>(k);
  for (const auto& s : sets) {
    FaceDescriptor fd;
    fd.point_ids = s;
    std::vector<int> loc;
    for (int id : s) loc.push_back(local.at(id));
    fd.dim = affine_rank(hull.red.reduced, loc) - 1;
    fd.codim = d - fd.dim;
    IVec w_red(d, 0);
    if (fd.codim > 0) {
      // canonical interior weight: unshortened sum of the primitive normals
      // of all facets containing the face
      for (const Facet& f : hull.facets) {
        if (!std::includes(f.pts.begin(), f.pts.end(), s.begin(), s.end())) continue;
        for (int i = 0; i < d; ++i) w_red[i] += f.normal[i];
      }
    }
    IVec w_amb(n, 0);
    if (identity) {
      w_amb = w_red;
    } else if (fd.codim > 0) {
      if (!integer_solve(lt, w_red, &w_amb)) throw Error("polytope: weight lift failed");
    }
    fd.weight.resize(n);
    for (size_t i = 0; i < n; ++i) {
      if (!w_amb[i].fits_slong_p()) throw Error("polytope: weight overflow");
      fd.weight[i] = w_amb[i].get_si();
    }
    faces.push_back(std::move(fd));
  }
  std::sort(faces.begin(), faces.end(), [](const FaceDescriptor& a, const FaceDescriptor& b) {
    if (a.codim != b.codim) return a.codim < b.codim;
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.point_ids < b.point_ids;
  });
  return faces;
}

std::vector<long> f_vector(const LatticePolytope& p) {
  auto faces = face_weights(p);
  int d = p.dim;
  std::vector<long> fv(std::max(d, 0), 0);
  for (const auto& f : faces)
    if (f.dim < d) ++fv[f.dim];
  return fv;
}

namespace {

mpz_class volume_of(HullContext& ctx, const std::vector<int>& subset,
                    std::map<std::vector<int>, mpz_class>& memo) {
  auto it = memo.find(subset);
  if (it != memo.end()) return it->second;
  const FaceHull& hull = ctx.hull_of(subset);
  const int d = hull.red.dim;
  mpz_class vol;
  if (d == 0) {
    vol = 1;
  } else if (d == 1) {
    mpz_class mn = hull.red.reduced[0][0], mx = mn;
    for (const auto& q : hull.red.reduced) {
      mn = std::min(mn, q[0]);
      mx = std::max(mx, q[0]);
    }
    vol = mx - mn;
  } else {
    // pyramid over the first point: sum of lattice height times facet volume
    const IVec& apex = hull.red.reduced[0];
    vol = 0;
    for (const Facet& f : hull.facets) {
      mpz_class h = idot(f.normal, apex) - f.offset;
      if (h == 0) continue;
      vol += h * volume_of(ctx, f.pts, memo);
    }
  }
  memo[subset] = vol;
  return vol;
}

}  // namespace

mpz_class normalized_volume(const LatticePolytope& p) {
  if (p.points.empty()) throw Error("polytope: empty polytope");
  HullContext ctx;
  ctx.points = &p.points;
  std::map<std::vector<int>, mpz_class> memo;
  return volume_of(ctx, all_ids(p.points.size()), memo);
}

MPoly initial_form(const MPoly& f, const std::vector<std::string>& vars,
                   const std::vector<long>& w) {
  if (f.is_zero()) return f;
  if (vars.size() != w.size()) throw Error("polytope: weight length mismatch");
  std::vector<int> positions(vars.size(), -1);
  const auto& fv = f.vars();
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = std::lower_bound(fv.begin(), fv.end(), vars[i]);
    if (it != fv.end() && *it == vars[i]) positions[i] = static_cast<int>(it - fv.begin());
  }
  bool first = true;
  long best = 0;
  auto level = [&](const std::vector<int>& e) {
    long s = 0;
    for (size_t i = 0; i < vars.size(); ++i)
      if (positions[i] >= 0) s += w[i] * e[positions[i]];
    return s;
  };
  for (const auto& [e, c] : f.terms()) {
    long s = level(e);
    if (first || s < best) {
      best = s;
      first = false;
    }
  }
  MPoly::Terms kept;
  for (const auto& [e, c] : f.terms())
    if (level(e) == best) kept.emplace(e, c);
  return MPoly::from_terms(f.vars(), std::move(kept));
}

}  // namespace pld

// Lattice polytopes: face enumeration with exposing weights, f-vectors,
// normalized volumes, and initial forms.
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pld/graph.hpp"
#include "pld/polytope.hpp"

using namespace pld;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

MPoly g_of(const FeynmanGraph& g, const MassSpec& m = MassSpec::all_generic(),
           const std::map<std::string, MPoly>& rel = {}) {
  return symanzik(g, m, rel).G;
}

FeynmanGraph banana3() { return {"B3", {{{1, 2}}, {{1, 2}}, {{1, 2}}}, {1, 2}, {}}; }
FeynmanGraph parachute() {
  return {"par", {{{3, 1}}, {{1, 2}}, {{2, 3}}, {{2, 3}}}, {1, 1, 2, 3}, {}};
}
FeynmanGraph kite() {
  return {"kite", {{{1, 2}}, {{1, 3}}, {{2, 3}}, {{2, 4}}, {{3, 4}}}, {1, 4}, {}};
}
FeynmanGraph one_loop(int n) {
  FeynmanGraph g{"A" + std::to_string(n), {}, {}, {}};
  g.edges.push_back({n, 1});
  for (int i = 1; i < n; ++i) g.edges.push_back({i, i + 1});
  for (int i = 1; i <= n; ++i) g.nodes.push_back(i);
  return g;
}

std::vector<std::string> xvars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

// One-loop graph polynomial support lives on the truncated simplex
// Conv(e_i, 2 e_i); its f-vector is (2n, 2*C(n,2)+C(n,1), ..., 2*C(n,n)+C(n,n-1)).
std::vector<long> truncated_simplex_f(int n) {
  std::vector<long> f = {2L * n};
  for (int k = 1; k <= n - 1; ++k)
    f.push_back(2 * binom(n, k + 1).get_si() + binom(n, k).get_si());
  return f;
}

// Second hypersimplex Conv(e_i + e_j : i < j) in R^(n+1), direct point set.
LatticePolytope hypersimplex2(int n) {
  MPoly f;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      f += MPoly::var("t" + std::to_string(i)) * MPoly::var("t" + std::to_string(j));
  std::vector<std::string> vars;
  for (int i = 0; i <= n; ++i) vars.push_back("t" + std::to_string(i));
  return newton_polytope(f, vars);
}

bool has_weight(const std::vector<FaceDescriptor>& faces,
                const std::vector<long>& w, int codim) {
  for (const auto& f : faces)
    if (f.codim == codim && f.weight == w) return true;
  return false;
}

}  // namespace

TEST_CASE("unit square") {
  LatticePolytope p =
      newton_polytope(P("z1 + z2*a1 + z3*a2 + z4*a1*a2"), {"a1", "a2"});
  CHECK(p.dim == 2);
  CHECK(p.points.size() == 4);
  CHECK(f_vector(p) == std::vector<long>{4, 4});
  CHECK(normalized_volume(p) == 2);
}

TEST_CASE("low-dimensional degenerate cases") {
  LatticePolytope pt = newton_polytope(P("x^2*y"), {"x", "y"});
  CHECK(pt.dim == 0);
  CHECK(f_vector(pt).empty());
  CHECK(normalized_volume(pt) == 1);
  CHECK(face_weights(pt).size() == 1);  // only the polytope itself

  LatticePolytope seg = newton_polytope(P("1 + x^3"), {"x"});
  CHECK(seg.dim == 1);
  CHECK(f_vector(seg) == std::vector<long>{2});
  CHECK(normalized_volume(seg) == 3);

  // segment embedded diagonally in the plane: induced lattice, not ambient
  LatticePolytope diag = newton_polytope(P("1 + x^2*y^2"), {"x", "y"});
  CHECK(diag.dim == 1);
  CHECK(normalized_volume(diag) == 2);
}

TEST_CASE("banana graph polytope") {
  LatticePolytope p = newton_polytope(g_of(banana3()), xvars(3));
  CHECK(p.dim == 3);
  CHECK(f_vector(p) == std::vector<long>{9, 15, 8});
  CHECK(normalized_volume(p) == 10);

  auto faces = face_weights(p);
  CHECK(faces.size() == 1 + 9 + 15 + 8);

  // the whole polytope comes first with weight zero, then codim ascending
  CHECK(faces[0].codim == 0);
  CHECK(faces[0].weight == std::vector<long>(3, 0));
  for (size_t i = 0; i + 1 < faces.size(); ++i)
    CHECK(faces[i].codim <= faces[i + 1].codim);
  for (const auto& f : faces) {
    CHECK((f.codim == 0) == (f.weight == std::vector<long>(3, 0)));
    CHECK(f.dim + f.codim == p.dim);
  }
}

TEST_CASE("parachute graph polytope") {
  LatticePolytope p = newton_polytope(g_of(parachute()), xvars(4));
  CHECK(p.dim == 4);
  CHECK(f_vector(p) == std::vector<long>{15, 33, 27, 9});
  auto faces = face_weights(p);
  CHECK(faces.size() == 85);

  // facet weights are the primitive inward normals; the all-negative ray
  // exposes the second Symanzik face
  CHECK(has_weight(faces, {-1, -1, -1, -1}, 1));
  CHECK(has_weight(faces, {1, 0, 0, 0}, 1));
  // the bubble-subgraph inequality x3 + x4 >= 1 is itself a facet
  CHECK(has_weight(faces, {0, 0, 1, 1}, 1));

  // restricted kinematic subspace changes the support and the face counts
  MPoly gres = g_of(parachute(), MassSpec::all_generic(),
                    {{"s", MPoly()}, {"m1", MPoly()}, {"m2", MPoly()}});
  LatticePolytope pr = newton_polytope(gres, xvars(4));
  CHECK(f_vector(pr) == std::vector<long>{11, 23, 19, 7});
}

TEST_CASE("kite graph polytope") {
  LatticePolytope p = newton_polytope(g_of(kite()), xvars(5));
  CHECK(p.dim == 5);
  CHECK(f_vector(p) == std::vector<long>{24, 66, 73, 39, 10});
}

TEST_CASE("one-loop polytopes are truncated simplices") {
  for (int n = 2; n <= 6; ++n) {
    LatticePolytope p = newton_polytope(g_of(one_loop(n)), xvars(n));
    CHECK(p.dim == n);
    CHECK(f_vector(p) == truncated_simplex_f(n));
    CHECK(normalized_volume(p) == mpz_class((1 << n) - 1));
  }
}

TEST_CASE("second hypersimplex: subspace reduction") {
  for (int n = 3; n <= 6; ++n) {
    LatticePolytope p = hypersimplex2(n);
    CHECK(p.dim == n);  // lives in the hyperplane sum = 2 of R^(n+1)
    std::vector<long> expect = {binom(n + 1, 2).get_si(),
                                binom(n + 1, 2).get_si() * (n - 1)};
    for (int k = 2; k <= n - 1; ++k)
      expect.push_back(binom(n + 1, k + 1).get_si() * (n - k + 1));
    CHECK(f_vector(p) == expect);
    CHECK(normalized_volume(p) == mpz_class((1 << n) - n - 1));
  }
}

TEST_CASE("initial forms") {
  MPoly g = g_of(parachute());
  MPoly f_full = symanzik(parachute(), MassSpec::all_generic()).F;

  // the all-negative facet carries the full second Symanzik polynomial
  CHECK(initial_form(g, xvars(4), {-1, -1, -1, -1}) == f_full);

  // a deeper face factors into a bubble piece times an edge-pair piece
  CHECK(initial_form(g, xvars(4), {-1, -1, 0, 0}) ==
        P("(x3 + x4)*((s - m1 - m2)*x1*x2 - m1*x1^2 - m2*x2^2)"));

  // zero weight returns the polynomial unchanged
  CHECK(initial_form(g, xvars(4), {0, 0, 0, 0}) == g);

  // the bubble-subgraph facet carries U_bubble times G of the contraction
  CHECK(initial_form(g, xvars(4), {0, 0, 1, 1}) ==
        P("(x3 + x4)*(x1 + x2 + (s - m1 - m2)*x1*x2 - m1*x1^2 - m2*x2^2)"));

  // initial form of an initial form with the same weight is idempotent
  MPoly in = initial_form(g, xvars(4), {-1, -1, 0, 0});
  CHECK(initial_form(in, xvars(4), {-1, -1, 0, 0}) == in);
}

TEST_CASE("face supports match initial forms") {
  MPoly g = g_of(banana3());
  LatticePolytope p = newton_polytope(g, xvars(3));
  auto faces = face_weights(p);
  for (const auto& f : faces) {
    MPoly in = initial_form(g, xvars(3), f.weight);
    LatticePolytope q = newton_polytope(in, xvars(3));
    std::set<IVec> got(q.points.begin(), q.points.end());
    std::set<IVec> want;
    for (int id : f.point_ids) want.insert(p.points[id]);
    CHECK(got == want);
  }
}

TEST_CASE("support points partition into relative face interiors") {
  for (const MPoly& g : {g_of(banana3()), g_of(parachute())}) {
    int n = g.depends_on("x4") ? 4 : 3;
    LatticePolytope p = newton_polytope(g, xvars(n));
    auto faces = face_weights(p);
    for (size_t id = 0; id < p.points.size(); ++id) {
      // faces containing the point, ordered by size; the smallest must be
      // contained in every other one (unique minimal face)
      std::vector<const FaceDescriptor*> holding;
      for (const auto& f : faces)
        if (std::find(f.point_ids.begin(), f.point_ids.end(),
                      static_cast<int>(id)) != f.point_ids.end())
          holding.push_back(&f);
      REQUIRE(!holding.empty());
      auto smallest = *std::min_element(
          holding.begin(), holding.end(), [](const auto* a, const auto* b) {
            return a->point_ids.size() < b->point_ids.size();
          });
      for (const auto* f : holding)
        for (int q : smallest->point_ids)
          CHECK(std::find(f->point_ids.begin(), f->point_ids.end(), q) !=
                f->point_ids.end());
    }
  }
}

TEST_CASE("unimodular invariance of f-vector and volume") {
  MPoly g = g_of(banana3());
  // exponents a -> U a with U in SL(3, Z) (may go negative: Laurent support)
  std::vector<std::vector<long>> u = {{1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
  MPoly h;
  LatticePolytope p = newton_polytope(g, xvars(3));
  for (const auto& pt : p.points) {
    MPoly mono{Rat(1)};
    for (int i = 0; i < 3; ++i) {
      long e = 0;
      for (int j = 0; j < 3; ++j) e += u[i][j] * pt[j].get_si();
      mono *= MPoly::var("x" + std::to_string(i + 1), static_cast<int>(e));
    }
    h += mono;
  }
  LatticePolytope q = newton_polytope(h, xvars(3));
  CHECK(f_vector(q) == f_vector(p));
  CHECK(normalized_volume(q) == normalized_volume(p));
}

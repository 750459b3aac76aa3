// Feynman graphs: Symanzik polynomials, kinematic channel bases,
// contraction/deletion minors, and the dehomogenized Euler form.
#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pld/graph.hpp"

using namespace pld;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

FeynmanGraph banana3() { return {"B3", {{{1, 2}}, {{1, 2}}, {{1, 2}}}, {1, 2}, {}}; }
FeynmanGraph bubble2() { return {"A2", {{{2, 1}}, {{1, 2}}}, {1, 2}, {}}; }
FeynmanGraph triangle() { return {"A3", {{{3, 1}}, {{1, 2}}, {{2, 3}}}, {1, 2, 3}, {}}; }
FeynmanGraph box4() {
  return {"A4", {{{4, 1}}, {{1, 2}}, {{2, 3}}, {{3, 4}}}, {1, 2, 3, 4}, {}};
}
FeynmanGraph parachute() {
  return {"par", {{{3, 1}}, {{1, 2}}, {{2, 3}}, {{2, 3}}}, {1, 1, 2, 3}, {}};
}
FeynmanGraph kite() {
  return {"kite", {{{1, 2}}, {{1, 3}}, {{2, 3}}, {{2, 4}}, {{3, 4}}}, {1, 4}, {}};
}
FeynmanGraph tadpole_bubble() {
  return {"tad", {{{1, 1}}, {{1, 2}}}, {1, 2}, {}};
}

// Brute-force spanning-tree count: enumerate all edge subsets of size
// |V| - 1 and keep the acyclic spanning ones. Independent of the library's
// subset scan (plain loops, own union-find).
int spanning_tree_count(const FeynmanGraph& g) {
  std::set<int> vs;
  for (auto& e : g.edges) {
    vs.insert(e[0]);
    vs.insert(e[1]);
  }
  for (int v : g.nodes) vs.insert(v);
  std::vector<int> verts(vs.begin(), vs.end());
  const int nv = static_cast<int>(verts.size());
  const int ne = static_cast<int>(g.edges.size());
  auto vid = [&](int label) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), label) -
                            verts.begin());
  };
  int count = 0;
  std::vector<int> pick(ne, 0);
  std::fill(pick.end() - (nv - 1), pick.end(), 1);
  do {
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    bool acyclic = true;
    for (int e = 0; e < ne && acyclic; ++e) {
      if (!pick[e]) continue;
      int a = find(vid(g.edges[e][0])), b = find(vid(g.edges[e][1]));
      if (a == b)
        acyclic = false;
      else
        parent[a] = b;
    }
    if (acyclic) ++count;  // |V|-1 acyclic edges on nv vertices span
  } while (std::next_permutation(pick.begin(), pick.end()));
  return count;
}

// Initial form by direct epsilon-scaling: substitute x_i -> eps^{w_i} x_i
// and keep the lowest order in eps.
MPoly eps_initial(const MPoly& g, const std::vector<std::string>& xs,
                  const std::vector<int>& w) {
  std::map<std::string, MPoly> fwd, back;
  for (size_t i = 0; i < xs.size(); ++i) {
    fwd[xs[i]] = MPoly::var("eps", w[i]) * MPoly::var(xs[i] + "_in");
    back[xs[i] + "_in"] = MPoly::var(xs[i]);
  }
  MPoly h = g.subst(fwd);
  MPoly in = h.depends_on("eps") ? h.coeff_in("eps", h.min_degree_in("eps")) : h;
  return in.subst(back);
}

// Exponent support restricted to the alpha variables.
std::set<std::vector<int>> alpha_support(const SymanzikRep& rep, const MPoly& p) {
  std::set<std::vector<int>> out;
  for (const auto& [exps, c] : p.terms()) {
    std::vector<int> key;
    for (const auto& v : rep.alpha_vars) {
      auto it = std::lower_bound(p.vars().begin(), p.vars().end(), v);
      key.push_back(it != p.vars().end() && *it == v
                        ? exps[it - p.vars().begin()]
                        : 0);
    }
    out.insert(key);
  }
  return out;
}

}  // namespace

TEST_CASE("graph basics") {
  CHECK(banana3().vertex_count() == 2);
  CHECK(banana3().loop_count() == 2);
  CHECK(parachute().loop_count() == 2);
  CHECK(kite().loop_count() == 2);
  CHECK(box4().loop_count() == 1);
  CHECK(banana3().connected());
  FeynmanGraph disc{"d", {{{1, 2}}, {{3, 4}}}, {1, 3}, {}};
  CHECK_FALSE(disc.connected());
  CHECK_THROWS_AS(symanzik(disc, MassSpec::all_generic()), Error);
}

TEST_CASE("first Symanzik polynomial") {
  CHECK(symanzik_u(banana3()) == P("x1*x2 + x1*x3 + x2*x3"));
  CHECK(symanzik_u(bubble2()) == P("x1 + x2"));
  CHECK(symanzik_u(triangle()) == P("x1 + x2 + x3"));
  CHECK(symanzik_u(parachute()) == P("(x1 + x2)*(x3 + x4) + x3*x4"));

  for (const FeynmanGraph& g :
       {banana3(), bubble2(), triangle(), box4(), parachute(), kite(),
        tadpole_bubble()}) {
    MPoly u = symanzik_u(g);
    // all coefficients +1, one term per spanning tree
    for (const auto& [exps, c] : u.terms()) {
      CHECK(c == Rat(1));
      long deg = 0;
      for (int e : exps) {
        CHECK((e == 0 || e == 1));  // square-free monomials
        deg += e;
      }
      CHECK(deg == g.loop_count());
    }
    CHECK(static_cast<int>(u.term_count()) == spanning_tree_count(g));
  }
}

TEST_CASE("two-point kinematics and the bubble") {
  SymanzikRep rep = symanzik(bubble2(), MassSpec::all_generic());
  CHECK(rep.U == P("x1 + x2"));
  CHECK(rep.F == P("(s - m1 - m2)*x1*x2 - m1*x1^2 - m2*x2^2"));
  CHECK(rep.G == rep.U + rep.F);
  CHECK(rep.params == std::vector<std::string>{"s", "m1", "m2"});

  KinematicSpace kin = kinematic_space(2, MassSpec::all_generic());
  CHECK(kin.channel_names == std::vector<std::string>{"s"});
  CHECK(kin.channel_sq({1}) == P("s"));
  CHECK(kin.channel_sq({2}) == P("s"));
  CHECK(kin.channel_sq({1, 2}) == MPoly());
}

TEST_CASE("three-point kinematics uses only external masses") {
  KinematicSpace kin = kinematic_space(3, MassSpec::all_generic());
  CHECK(kin.channel_names.empty());
  CHECK(kin.channel_sq({1}) == P("M1"));
  CHECK(kin.channel_sq({2}) == P("M2"));
  CHECK(kin.channel_sq({3}) == P("M3"));  // via momentum conservation
  CHECK(kin.channel_sq({1, 2}) == P("M3"));

  SymanzikRep rep = symanzik(triangle(), MassSpec::all_generic());
  CHECK(rep.F + P("(m1*x1 + m2*x2 + m3*x3)*(x1 + x2 + x3)") ==
        P("M1*x1*x2 + M2*x2*x3 + M3*x1*x3"));
}

TEST_CASE("four-point kinematics eliminates u by conservation") {
  KinematicSpace kin = kinematic_space(4, MassSpec::all_generic());
  CHECK(kin.channel_names == std::vector<std::string>{"s", "t"});
  CHECK(kin.channel_sq({1, 2}) == P("s"));
  CHECK(kin.channel_sq({2, 3}) == P("t"));
  CHECK(kin.channel_sq({1, 3}) == P("M1 + M2 + M3 + M4 - s - t"));
  CHECK(kin.channel_sq({1, 2, 3}) == P("M4"));
  CHECK(kin.channel_sq({4}) == P("M4"));
  CHECK(kin.channel_sq({1, 2, 3, 4}) == MPoly());
  for (int k = 1; k <= 4; ++k)
    CHECK(kin.channel_sq({k}) == MPoly::var("M" + std::to_string(k)));

  SymanzikRep rep = symanzik(box4(), MassSpec::all_generic());
  CHECK(rep.params == std::vector<std::string>{"s", "t", "M1", "M2", "M3", "M4",
                                               "m1", "m2", "m3", "m4"});
}

TEST_CASE("five- and six-point channel bases") {
  KinematicSpace k5 = kinematic_space(5, MassSpec::all_generic());
  CHECK(k5.channel_names ==
        std::vector<std::string>{"s12", "s23", "s34", "s45", "s51"});
  CHECK(k5.channel_sq({1, 2}) == P("s12"));
  CHECK(k5.channel_sq({4, 5}) == P("s45"));  // complement representation
  CHECK(k5.channel_sq({3}) == P("M3"));
  CHECK(k5.channel_sq({5}) == P("M5"));
  CHECK(k5.channel_sq({1, 2, 3, 4, 5}) == MPoly());

  KinematicSpace k6 = kinematic_space(6, MassSpec::all_generic());
  CHECK(k6.channel_names ==
        std::vector<std::string>{"s12", "s23", "s34", "s45", "s56", "s61",
                                 "s123", "s234", "s345"});
  for (int k = 1; k <= 6; ++k)
    CHECK(k6.channel_sq({k}) == MPoly::var("M" + std::to_string(k)));
  CHECK(k6.channel_sq({4, 5, 6}) == P("s123"));  // equals its complement
}

TEST_CASE("banana B3 matches the bracketed integrand") {
  SymanzikRep rep = symanzik(banana3(), MassSpec::all_generic());
  CHECK(rep.U == P("x1*x2 + x1*x3 + x2*x3"));
  CHECK(rep.G == P("(1 - m1*x1 - m2*x2 - m3*x3)*(x1*x2 + x1*x3 + x2*x3) "
                   "+ s*x1*x2*x3"));
  CHECK(rep.params == std::vector<std::string>{"s", "m1", "m2", "m3"});
  CHECK(rep.alpha_vars == std::vector<std::string>{"x1", "x2", "x3"});
}

TEST_CASE("parachute Symanzik polynomials") {
  SymanzikRep rep = symanzik(parachute(), MassSpec::all_generic());
  CHECK(rep.U == P("(x1 + x2)*(x3 + x4) + x3*x4"));
  // legs 1 and 2 enter at the same vertex: only the s-channel and the
  // masses of legs 3, 4 can appear
  CHECK(rep.F == P("s*x1*x2*(x3 + x4) + M3*x2*x3*x4 + M4*x1*x3*x4") -
                     P("(m1*x1 + m2*x2 + m3*x3 + m4*x4)") * rep.U);
  CHECK(rep.params ==
        std::vector<std::string>{"s", "M3", "M4", "m1", "m2", "m3", "m4"});

  // restricting the kinematic subspace by relations
  SymanzikRep res = symanzik(parachute(), MassSpec::all_generic(),
                             {{"s", MPoly()}, {"m1", MPoly()}, {"m2", MPoly()}});
  CHECK(res.F == P("M3*x2*x3*x4 + M4*x1*x3*x4") -
                     P("(m3*x3 + m4*x4)") * res.U);
  CHECK(res.G == res.U + res.F);
}

TEST_CASE("homogeneity: deg U = L, deg F = L + 1 per term") {
  for (const FeynmanGraph& g :
       {banana3(), bubble2(), triangle(), box4(), parachute(), kite()}) {
    SymanzikRep rep = symanzik(g, MassSpec::all_generic());
    int L = g.loop_count();
    for (const MPoly* p : {&rep.U, &rep.F}) {
      int want = p == &rep.U ? L : L + 1;
      for (const auto& [exps, c] : p->terms()) {
        long deg = 0;
        for (size_t i = 0; i < p->vars().size(); ++i)
          if (std::binary_search(rep.alpha_vars.begin(), rep.alpha_vars.end(),
                                 p->vars()[i]))
            deg += exps[i];
        CHECK(deg == want);
      }
    }
    // coefficients of G are linear in the kinematic parameters
    for (const auto& [exps, c] : rep.G.terms()) {
      long pdeg = 0;
      for (size_t i = 0; i < rep.G.vars().size(); ++i)
        if (!std::binary_search(rep.alpha_vars.begin(), rep.alpha_vars.end(),
                                rep.G.vars()[i]))
          pdeg += exps[i];
      CHECK(pdeg <= 1);
    }
  }
}

TEST_CASE("mass specifications") {
  SymanzikRep massless = symanzik(banana3(), MassSpec::massless_internal());
  CHECK(massless.F == P("s*x1*x2*x3"));

  MassSpec equal = MassSpec::equal_internal_external();
  SymanzikRep eq = symanzik(bubble2(), equal);
  CHECK(eq.F == P("(s - 2*m2)*x1*x2 - m2*x1^2 - m2*x2^2"));

  MassSpec custom;
  custom.internal = MassSpec::Kind::custom;
  custom.internal_custom = {P("m2"), P("m2"), P("0")};
  SymanzikRep cu = symanzik(banana3(), custom);
  CHECK(cu.internal_masses == std::vector<MPoly>{P("m2"), P("m2"), MPoly()});

  MassSpec bad = custom;
  bad.internal_custom = {P("m2")};
  CHECK_THROWS_AS(symanzik(banana3(), bad), Error);

  // zeroing external masses does not change the monomial support of G
  for (const FeynmanGraph& g : {bubble2(), triangle(), box4()}) {
    SymanzikRep gen = symanzik(g, MassSpec::all_generic());
    MassSpec ext0;
    ext0.external = MassSpec::Kind::zero;
    SymanzikRep zero = symanzik(g, ext0);
    CHECK(alpha_support(gen, gen.G) == alpha_support(zero, zero.G));
  }
}

TEST_CASE("contraction and deletion minors") {
  // contracting an edge of the triangle leaves a two-edge banana
  FeynmanGraph tri_c = contract(triangle(), {0});
  CHECK(symanzik_u(tri_c) == P("x1 + x2"));

  // deleting one banana edge leaves the smaller banana
  CHECK(symanzik_u(delete_edge(banana3(), 0)) == P("x1 + x2"));

  // contracting a banana edge merges the endpoints into a two-loop rose
  FeynmanGraph rose = contract(banana3(), {0});
  CHECK(rose.vertex_count() == 1);
  CHECK(symanzik_u(rose) == P("x1*x2"));

  // parachute with the second edge shrunk is a three-edge banana
  FeynmanGraph par_c = contract(parachute(), {1});
  CHECK(symanzik_u(par_c) == P("x1*x2 + x1*x3 + x2*x3"));
  CHECK(par_c.loop_count() == 2);

  CHECK_THROWS_AS(contract(banana3(), {0, 1, 2}), Error);
  CHECK_THROWS_AS(contract(banana3(), std::vector<int>{}), Error);

  // deletion keeps pinned endpoints alive: deletion-contraction identity
  for (const FeynmanGraph& g : {triangle(), box4(), parachute(), kite()}) {
    MPoly u = symanzik_u(g);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      auto rename = [&](const MPoly& p) {
        std::map<std::string, MPoly> back;
        int kept = 0;
        for (int j = 0; j < static_cast<int>(g.edges.size()); ++j) {
          if (j == e) continue;
          ++kept;
          if (kept != j + 1)
            back["x" + std::to_string(kept)] =
                MPoly::var("x" + std::to_string(j + 1));
        }
        return p.subst(back);
      };
      MPoly udel = rename(symanzik_u(delete_edge(g, e)));
      MPoly ucon = rename(symanzik_u(contract(g, {e})));
      CHECK(u == ucon + MPoly::var("x" + std::to_string(e + 1)) * udel);
    }
  }
}

TEST_CASE("initial forms factor through contraction") {
  // Scaling the edges of a subgraph to zero: the leading form of G is the
  // first Symanzik polynomial of the subgraph times G of the contracted
  // diagram. Verified by direct epsilon-scaling.
  auto renamed_minor_g = [](const FeynmanGraph& g, const std::vector<int>& gam) {
    FeynmanGraph minor = contract(g, gam);
    SymanzikRep rep = symanzik(minor, MassSpec::all_generic());
    std::map<std::string, MPoly> back;
    std::set<int> in_gamma(gam.begin(), gam.end());
    int kept = 0;
    for (int j = 0; j < static_cast<int>(g.edges.size()); ++j) {
      if (in_gamma.count(j)) continue;
      ++kept;
      if (kept == j + 1) continue;  // identity rename
      back["x" + std::to_string(kept)] = MPoly::var("x" + std::to_string(j + 1));
      back["m" + std::to_string(kept)] = MPoly::var("m" + std::to_string(j + 1));
    }
    return rep.G.subst(back);
  };

  // bubble subdiagram of the parachute: U_gamma = x3 + x4
  {
    SymanzikRep rep = symanzik(parachute(), MassSpec::all_generic());
    MPoly in = eps_initial(rep.G, rep.alpha_vars, {0, 0, 1, 1});
    CHECK(in == P("x3 + x4") * renamed_minor_g(parachute(), {2, 3}));
  }

  // every single non-loop edge: U_gamma = 1
  for (const FeynmanGraph& g :
       {banana3(), bubble2(), triangle(), box4(), parachute(), kite()}) {
    SymanzikRep rep = symanzik(g, MassSpec::all_generic());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      std::vector<int> w(g.edges.size(), 0);
      w[e] = 1;
      MPoly in = eps_initial(rep.G, rep.alpha_vars, w);
      CHECK(in == renamed_minor_g(g, {e}));
    }
  }

  // a self-loop contributes U_gamma = x_e
  {
    SymanzikRep rep = symanzik(tadpole_bubble(), MassSpec::all_generic());
    MPoly in = eps_initial(rep.G, rep.alpha_vars, {1, 0});
    CHECK(in == P("x1") * renamed_minor_g(tadpole_bubble(), {0}));
  }
}

TEST_CASE("vertex relabeling leaves the polynomials unchanged") {
  for (const FeynmanGraph& g : {triangle(), parachute(), kite()}) {
    std::map<int, int> vmap = {{1, 7}, {2, 4}, {3, 9}, {4, 12}};
    std::vector<int> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    FeynmanGraph h = relabel(g, vmap, order);
    SymanzikRep a = symanzik(g, MassSpec::all_generic());
    SymanzikRep b = symanzik(h, MassSpec::all_generic());
    CHECK(a.U == b.U);
    CHECK(a.F == b.F);
  }
}

TEST_CASE("dehomogenized Euler form and the torus pullback") {
  SymanzikRep rep = symanzik(banana3(), MassSpec::all_generic());
  EulerRep er = feynman_rep(rep.U, rep.F);
  CHECK(er.ubar == P("x1*x2 + x1 + x2"));
  CHECK(er.h == er.ubar + MPoly::var("y") * er.fbar);

  // phi: x_i -> y*x_i (i < E), x_E -> y pulls U + F back to y^L * H exactly
  for (const FeynmanGraph& g : {banana3(), parachute(), box4(), kite()}) {
    SymanzikRep r = symanzik(g, MassSpec::all_generic());
    EulerRep e = feynman_rep(r.U, r.F);
    size_t ne = r.alpha_vars.size();
    std::map<std::string, MPoly> phi, fresh;
    for (size_t i = 0; i + 1 < ne; ++i) {
      phi[r.alpha_vars[i]] =
          MPoly::var("y") * MPoly::var(r.alpha_vars[i] + "b");
      fresh[r.alpha_vars[i]] = MPoly::var(r.alpha_vars[i] + "b");
    }
    phi[r.alpha_vars[ne - 1]] = MPoly::var("y");
    CHECK(r.G.subst(phi) ==
          MPoly::var("y", g.loop_count()) * e.h.subst(fresh));
  }

  CHECK_THROWS_AS(feynman_rep(rep.U, rep.U), Error);          // same degree
  CHECK_THROWS_AS(feynman_rep(P("x1 + 1"), P("x1^2")), Error);  // inhomogeneous
}

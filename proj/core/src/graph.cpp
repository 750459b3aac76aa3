#include "pld/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>

#include "pld/linalg.hpp"

namespace pld {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  // returns false if a and b were already connected (a cycle would form)
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::vector<int> all_vertices(const FeynmanGraph& g) {
  std::set<int> s;
  for (const auto& e : g.edges) {
    s.insert(e[0]);
    s.insert(e[1]);
  }
  for (int v : g.nodes) s.insert(v);
  for (int v : g.pinned_vertices) s.insert(v);
  return {s.begin(), s.end()};
}

int vertex_index(const std::vector<int>& labels, int v) {
  auto it = std::lower_bound(labels.begin(), labels.end(), v);
  if (it == labels.end() || *it != v) throw Error("graph: unknown vertex label");
  return static_cast<int>(it - labels.begin());
}

std::string alpha_name(size_t edge) { return "x" + std::to_string(edge + 1); }

MPoly complement_monomial(const FeynmanGraph& g, unsigned kept_mask) {
  MPoly m(Rat(1));
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (!(kept_mask >> e & 1u)) m *= MPoly::var(alpha_name(e));
  return m;
}

// natural order: split a trailing integer off the name and compare
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    long num = -1;
    if (i < s.size() && s.size() - i <= 18) num = std::stol(s.substr(i));
    return std::make_pair(s.substr(0, i), num);
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na != nb) return na < nb;
  return a < b;
}

}  // namespace

int FeynmanGraph::vertex_count() const { return static_cast<int>(all_vertices(*this).size()); }

std::vector<int> FeynmanGraph::vertex_labels() const { return all_vertices(*this); }

namespace {

int component_count(const FeynmanGraph& g) {
  std::vector<int> labels = all_vertices(g);
  UnionFind uf(static_cast<int>(labels.size()));
  for (const auto& e : g.edges) uf.merge(vertex_index(labels, e[0]), vertex_index(labels, e[1]));
  std::set<int> roots;
  for (size_t i = 0; i < labels.size(); ++i) roots.insert(uf.find(static_cast<int>(i)));
  return static_cast<int>(roots.size());
}

}  // namespace

int FeynmanGraph::loop_count() const {
  return static_cast<int>(edges.size()) - vertex_count() + component_count(*this);
}

bool FeynmanGraph::connected() const { return component_count(*this) <= 1; }

MassSpec MassSpec::all_generic() { return {}; }

MassSpec MassSpec::massless_internal() {
  MassSpec s;
  s.internal = Kind::zero;
  return s;
}

MassSpec MassSpec::massless_all() {
  MassSpec s;
  s.internal = Kind::zero;
  s.external = Kind::zero;
  return s;
}

MassSpec MassSpec::equal_internal_external() {
  MassSpec s;
  s.internal = Kind::equal;
  s.external = Kind::equal;
  return s;
}

// ------------------------------------------------------------- kinematics

namespace {

std::vector<std::vector<int>> channel_windows(int n) {
  std::vector<std::vector<int>> windows;
  for (int len = 2; len <= n - 2; ++len) {
    if (2 * len > n) break;  // complements of shorter windows
    int starts = (2 * len == n) ? n / 2 : n;
    for (int s = 1; s <= starts; ++s) {
      std::vector<int> w;
      for (int k = 0; k < len; ++k) w.push_back((s - 1 + k) % n + 1);
      windows.push_back(std::move(w));
    }
  }
  return windows;
}

std::string channel_name(int n, const std::vector<int>& window, size_t index) {
  if (n == 4) return index == 0 ? "s" : "t";
  std::string name = "s";
  for (int k : window) {
    if (k > 9) throw Error("kinematics: more than 9 external legs unsupported");
    name += std::to_string(k);
  }
  return name;
}

}  // namespace

KinematicSpace kinematic_space(int legs, const MassSpec& masses) {
  KinematicSpace kin;
  kin.legs = legs;
  auto resolve_external = [&](int k) -> MPoly {
    switch (masses.external) {
      case MassSpec::Kind::generic:
        return MPoly::var("M" + std::to_string(k));
      case MassSpec::Kind::equal:
        return MPoly::var("M2");
      case MassSpec::Kind::zero:
        return MPoly();
      case MassSpec::Kind::custom:
        if (static_cast<size_t>(legs) != masses.external_custom.size())
          throw Error("kinematics: external mass list length mismatch");
        return masses.external_custom[k - 1];
    }
    throw Error("kinematics: bad mass kind");
  };

  if (legs <= 1) return kin;
  if (legs == 2) {
    switch (masses.external) {
      case MassSpec::Kind::zero:
        kin.two_leg_invariant = MPoly();
        break;
      case MassSpec::Kind::custom:
        if (masses.external_custom.empty())
          throw Error("kinematics: external mass list length mismatch");
        kin.two_leg_invariant = masses.external_custom[0];
        break;
      default:
        kin.two_leg_invariant = MPoly::var("s");
        kin.channel_names = {"s"};
    }
    return kin;
  }

  const int n = legs;
  for (int k = 1; k <= n; ++k) kin.external_masses.push_back(resolve_external(k));

  auto windows = channel_windows(n);
  for (size_t i = 0; i < windows.size(); ++i)
    kin.channel_names.push_back(channel_name(n, windows[i], i));

  // unknowns x_ij = p_i . p_j for 1 <= i <= j <= n-1
  std::map<std::pair<int, int>, int> index;
  for (int i = 1; i < n; ++i)
    for (int j = i; j < n; ++j) index[{i, j}] = static_cast<int>(index.size());
  const int m = static_cast<int>(index.size());

  QMat a;
  std::vector<MPoly> rhs;
  auto subset_row = [&](const std::vector<int>& legs_in) {
    QVec row(m, Rat(0));
    for (size_t u = 0; u < legs_in.size(); ++u)
      for (size_t v = u; v < legs_in.size(); ++v) {
        int i = std::min(legs_in[u], legs_in[v]), j = std::max(legs_in[u], legs_in[v]);
        row[index.at({i, j})] += (u == v) ? 1 : 2;
      }
    return row;
  };

  for (int i = 1; i < n; ++i) {
    a.push_back(subset_row({i}));
    rhs.push_back(kin.external_masses[i - 1]);
  }
  {
    std::vector<int> all;
    for (int i = 1; i < n; ++i) all.push_back(i);
    a.push_back(subset_row(all));
    rhs.push_back(kin.external_masses[n - 1]);
  }
  for (size_t c = 0; c < windows.size(); ++c) {
    std::vector<int> w = windows[c];
    if (std::find(w.begin(), w.end(), n) != w.end()) {
      std::vector<int> comp;
      for (int k = 1; k <= n; ++k)
        if (std::find(w.begin(), w.end(), k) == w.end()) comp.push_back(k);
      w = comp;
    }
    a.push_back(subset_row(w));
    rhs.push_back(MPoly::var(kin.channel_names[c]));
  }
  if (static_cast<int>(a.size()) != m) throw Error("kinematics: channel basis size mismatch");

  std::vector<MPoly> x = solve_linear_mpoly(a, rhs);
  for (const auto& [ij, idx] : index) kin.gram[ij] = x[idx];
  return kin;
}

MPoly KinematicSpace::channel_sq(const std::vector<int>& legs_subset) const {
  std::set<int> s(legs_subset.begin(), legs_subset.end());
  for (int k : s)
    if (k < 1 || k > legs) throw Error("kinematics: leg index out of range");
  if (legs <= 1) return MPoly();
  if (legs == 2) return s.size() == 1 ? two_leg_invariant : MPoly();
  if (s.count(legs)) {
    std::set<int> comp;
    for (int k = 1; k <= legs; ++k)
      if (!s.count(k)) comp.insert(k);
    s = comp;
  }
  MPoly out;
  for (auto u = s.begin(); u != s.end(); ++u)
    for (auto v = u; v != s.end(); ++v) {
      MPoly x = gram.at({*u, *v});
      out += (u == v) ? x : x * Rat(2);
    }
  return out;
}

// --------------------------------------------------------------- Symanzik

MPoly symanzik_u(const FeynmanGraph& g) {
  const size_t ne = g.edges.size();
  if (ne > 20) throw Error("graph: too many edges");
  std::vector<int> labels = all_vertices(g);
  const int nv = static_cast<int>(labels.size());
  MPoly u;
  for (unsigned mask = 0; mask < (1u << ne); ++mask) {
    if (std::popcount(mask) != nv - 1) continue;
    UnionFind uf(nv);
    bool acyclic = true;
    for (size_t e = 0; e < ne && acyclic; ++e)
      if (mask >> e & 1u)
        acyclic = uf.merge(vertex_index(labels, g.edges[e][0]),
                           vertex_index(labels, g.edges[e][1]));
    if (!acyclic) continue;  // nv-1 acyclic edges always span
    u += complement_monomial(g, mask);
  }
  return u;
}

MPoly symanzik_f0(const FeynmanGraph& g, const KinematicSpace& kin) {
  const size_t ne = g.edges.size();
  if (ne > 20) throw Error("graph: too many edges");
  std::vector<int> labels = all_vertices(g);
  const int nv = static_cast<int>(labels.size());
  if (nv < 2) return MPoly();
  MPoly f0;
  for (unsigned mask = 0; mask < (1u << ne); ++mask) {
    if (std::popcount(mask) != nv - 2) continue;
    UnionFind uf(nv);
    bool acyclic = true;
    for (size_t e = 0; e < ne && acyclic; ++e)
      if (mask >> e & 1u)
        acyclic = uf.merge(vertex_index(labels, g.edges[e][0]),
                           vertex_index(labels, g.edges[e][1]));
    if (!acyclic) continue;  // nv-2 acyclic edges give exactly 2 components
    int side_root = uf.find(0);
    std::vector<int> side_legs;
    for (size_t k = 0; k < g.nodes.size(); ++k)
      if (uf.find(vertex_index(labels, g.nodes[k])) == side_root)
        side_legs.push_back(static_cast<int>(k + 1));
    MPoly sq = kin.channel_sq(side_legs);
    if (sq.is_zero()) continue;
    f0 += sq * complement_monomial(g, mask);
  }
  return f0;
}

SymanzikRep symanzik(const FeynmanGraph& g, const MassSpec& masses,
                     const std::map<std::string, MPoly>& relations) {
  if (!g.connected()) throw Error("graph: disconnected graph");
  SymanzikRep rep;
  rep.graph = g;
  rep.kin = kinematic_space(static_cast<int>(g.nodes.size()), masses);
  rep.U = symanzik_u(g);
  rep.F0 = symanzik_f0(g, rep.kin);

  const size_t ne = g.edges.size();
  for (size_t e = 0; e < ne; ++e) {
    switch (masses.internal) {
      case MassSpec::Kind::generic:
        rep.internal_masses.push_back(MPoly::var("m" + std::to_string(e + 1)));
        break;
      case MassSpec::Kind::equal:
        rep.internal_masses.push_back(MPoly::var("m2"));
        break;
      case MassSpec::Kind::zero:
        rep.internal_masses.push_back(MPoly());
        break;
      case MassSpec::Kind::custom:
        if (masses.internal_custom.size() != ne)
          throw Error("graph: internal mass list length mismatch");
        rep.internal_masses.push_back(masses.internal_custom[e]);
        break;
    }
    rep.alpha_vars.push_back(alpha_name(e));
  }

  MPoly mass_sum;
  for (size_t e = 0; e < ne; ++e) mass_sum += rep.internal_masses[e] * MPoly::var(alpha_name(e));
  rep.F = rep.F0 - mass_sum * rep.U;
  if (!relations.empty()) {
    rep.U = rep.U.subst(relations);
    rep.F0 = rep.F0.subst(relations);
    rep.F = rep.F.subst(relations);
    for (auto& m : rep.internal_masses) m = m.subst(relations);
  }
  rep.G = rep.U + rep.F;

  // parameters: channels in window order, then external masses, then the rest
  std::set<std::string> seen(rep.G.vars().begin(), rep.G.vars().end());
  for (const auto& v : rep.alpha_vars) seen.erase(v);
  for (const auto& c : rep.kin.channel_names)
    if (seen.count(c)) {
      rep.params.push_back(c);
      seen.erase(c);
    }
  std::vector<std::string> rest_m, rest_other;
  for (const auto& v : seen)
    (v[0] == 'M' ? rest_m : rest_other).push_back(v);
  std::sort(rest_m.begin(), rest_m.end(), natural_less);
  std::sort(rest_other.begin(), rest_other.end(), natural_less);
  rep.params.insert(rep.params.end(), rest_m.begin(), rest_m.end());
  rep.params.insert(rep.params.end(), rest_other.begin(), rest_other.end());
  return rep;
}

// ------------------------------------------------------- graph operations

FeynmanGraph contract(const FeynmanGraph& g, const std::vector<int>& edge_indices) {
  std::set<int> gamma(edge_indices.begin(), edge_indices.end());
  if (gamma.empty()) throw Error("graph: empty contraction set");
  if (gamma.size() >= g.edges.size()) throw Error("graph: contracting every edge");
  for (int e : gamma)
    if (e < 0 || e >= static_cast<int>(g.edges.size()))
      throw Error("graph: edge index out of range");
  // merge endpoints of the contracted edges
  std::vector<int> labels = all_vertices(g);
  UnionFind uf(static_cast<int>(labels.size()));
  for (int e : gamma)
    uf.merge(vertex_index(labels, g.edges[e][0]), vertex_index(labels, g.edges[e][1]));
  auto map_vertex = [&](int v) {
    // representative keeps the smallest original label in its class
    int root = uf.find(vertex_index(labels, v));
    for (size_t i = 0; i < labels.size(); ++i)
      if (uf.find(static_cast<int>(i)) == root) return labels[i];
    return v;
  };
  FeynmanGraph h;
  h.name = g.name;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (gamma.count(e)) continue;
    h.edges.push_back({map_vertex(g.edges[e][0]), map_vertex(g.edges[e][1])});
  }
  for (int v : g.nodes) h.nodes.push_back(map_vertex(v));
  for (int v : g.pinned_vertices) h.pinned_vertices.push_back(map_vertex(v));
  return h;
}

FeynmanGraph delete_edge(const FeynmanGraph& g, int edge_index) {
  if (edge_index < 0 || edge_index >= static_cast<int>(g.edges.size()))
    throw Error("graph: edge index out of range");
  FeynmanGraph h;
  h.name = g.name;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (e != edge_index) h.edges.push_back(g.edges[e]);
  h.nodes = g.nodes;
  h.pinned_vertices = g.pinned_vertices;
  h.pinned_vertices.push_back(g.edges[edge_index][0]);
  h.pinned_vertices.push_back(g.edges[edge_index][1]);
  return h;
}

FeynmanGraph relabel(const FeynmanGraph& g, const std::map<int, int>& vertex_map,
                     const std::vector<int>& edge_order) {
  if (edge_order.size() != g.edges.size()) throw Error("graph: edge order length mismatch");
  FeynmanGraph h;
  h.name = g.name;
  auto map_vertex = [&](int v) {
    auto it = vertex_map.find(v);
    return it == vertex_map.end() ? v : it->second;
  };
  for (int e : edge_order) {
    std::array<int, 2> ed = g.edges.at(e);
    for (int& v : ed) v = map_vertex(v);
    h.edges.push_back(ed);
  }
  for (int v : g.nodes) h.nodes.push_back(map_vertex(v));
  for (int v : g.pinned_vertices) h.pinned_vertices.push_back(map_vertex(v));
  return h;
}

namespace {

bool is_alpha_var(const std::string& v) {
  if (v.size() < 2 || v[0] != 'x') return false;
  for (size_t i = 1; i < v.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
  return true;
}

// degree in the edge variables, or -1 if not homogeneous in them
int alpha_degree(const MPoly& p) {
  std::vector<size_t> alpha_pos;
  for (size_t i = 0; i < p.vars().size(); ++i)
    if (is_alpha_var(p.vars()[i])) alpha_pos.push_back(i);
  int deg = -1;
  for (const auto& [e, c] : p.terms()) {
    int d = 0;
    for (size_t i : alpha_pos) d += e[i];
    if (deg == -1)
      deg = d;
    else if (d != deg)
      return -1;
  }
  return deg;
}

}  // namespace

EulerRep feynman_rep(const MPoly& u, const MPoly& f) {
  int du = alpha_degree(u), df = alpha_degree(f);
  if (du < 0 || df < 0 || df != du + 1)
    throw Error("graph: expected homogeneous polynomials of consecutive degrees");
  // dehomogenize by the highest-numbered edge variable
  std::string last;
  long best = -1;
  for (const auto& p : {u, f})
    for (const auto& v : p.vars())
      if (is_alpha_var(v)) {
        long idx = std::stol(v.substr(1));
        if (idx > best) {
          best = idx;
          last = v;
        }
      }
  if (last.empty()) throw Error("graph: no edge variables found");
  std::map<std::string, MPoly> one = {{last, MPoly(Rat(1))}};
  EulerRep rep;
  rep.ubar = u.subst(one);
  rep.fbar = f.subst(one);
  rep.h = rep.ubar + MPoly::var("y") * rep.fbar;
  return rep;
}

}  // namespace pld

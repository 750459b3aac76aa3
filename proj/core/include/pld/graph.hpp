#pragma once

// Feynman graphs, their Symanzik polynomials, and the kinematic parameter
// space: external momenta are expressed through a basis of Mandelstam
// invariants (adjacent-window channels) and squared external masses, with
// the Gram matrix of momentum dot products solved exactly.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pld/mpoly.hpp"

namespace pld {

struct FeynmanGraph {
  std::string name;
  // Edge list with 1-based vertex labels; parallel edges and self-loops are
  // allowed.  Edge e carries the variable x{e+1}.
  std::vector<std::array<int, 2>> edges;
  // nodes[k] is the vertex where external momentum p_{k+1} enters.
  std::vector<int> nodes;
  // extra vertex labels that count even without incident edges (edge deletion
  // keeps its endpoints alive through this list)
  std::vector<int> pinned_vertices;

  int vertex_count() const;           // number of distinct vertex labels
  int loop_count() const;             // E - V + (#connected components)
  bool connected() const;
  std::vector<int> vertex_labels() const;  // sorted distinct labels
};

struct MassSpec {
  enum class Kind { generic, equal, zero, custom };
  Kind internal = Kind::generic;
  std::vector<MPoly> internal_custom;  // per edge, used when internal == custom
  Kind external = Kind::generic;
  std::vector<MPoly> external_custom;  // per leg, used when external == custom

  static MassSpec all_generic();
  static MassSpec massless_internal();  // internal zero, external generic
  static MassSpec massless_all();       // internal and external zero
  static MassSpec equal_internal_external();
};

// Momentum dot products resolved in a channel/mass basis.
struct KinematicSpace {
  int legs = 0;
  std::vector<std::string> channel_names;   // basis channels, window order
  std::vector<MPoly> external_masses;       // squared masses per leg (n >= 3)
  MPoly two_leg_invariant;                  // p^2 for n == 2

  // (sum of p_k over k in legs_subset)^2, expanded in the basis.
  // Legs are 1-based; the complement is used when leg n appears.
  MPoly channel_sq(const std::vector<int>& legs_subset) const;

  std::map<std::pair<int, int>, MPoly> gram;  // p_i . p_j for 1 <= i <= j < n
};

KinematicSpace kinematic_space(int legs, const MassSpec& masses);

// Graph polynomials on a kinematic subspace.
struct SymanzikRep {
  FeynmanGraph graph;
  MPoly U;   // first Symanzik polynomial
  MPoly F0;  // massless second Symanzik polynomial
  MPoly F;   // F0 - (sum of m_e x_e) U, with subspace relations applied
  MPoly G;   // U + F
  std::vector<MPoly> internal_masses;   // squared mass per edge
  std::vector<std::string> alpha_vars;  // x1..xE
  std::vector<std::string> params;      // channels, external masses, internal masses
  KinematicSpace kin;
};

// First Symanzik polynomial: sum over spanning trees of the product of the
// variables of the edges not in the tree.
MPoly symanzik_u(const FeynmanGraph& g);

// Massless second Symanzik polynomial: sum over spanning 2-forests of the
// squared momentum flowing between the parts times the complementary edge
// variables.
MPoly symanzik_f0(const FeynmanGraph& g, const KinematicSpace& kin);

// Full construction of (U, F, G) with masses resolved and optional linear
// subspace relations substituted into the coefficients at the end
// (e.g. {"s": 0} restricts the kinematic space).
SymanzikRep symanzik(const FeynmanGraph& g, const MassSpec& masses,
                     const std::map<std::string, MPoly>& relations = {});

// Contract the given edges (0-based indices): endpoints merged, edges
// removed, remaining edges renumbered x1..x{E-k} keeping their order.
// Contracting every edge is an error.
FeynmanGraph contract(const FeynmanGraph& g, const std::vector<int>& edge_indices);

// Delete edge e (0-based index) keeping all vertices.
FeynmanGraph delete_edge(const FeynmanGraph& g, int edge_index);

// Relabel vertices by a permutation and renumber edges by a permutation;
// used to test that the representation is independent of the presentation.
FeynmanGraph relabel(const FeynmanGraph& g, const std::map<int, int>& vertex_map,
                     const std::vector<int>& edge_order);

// Dehomogenized Euler form: set the last edge variable to 1 in the
// homogeneous U and F (variables are the x{k} symbols) and build
// H = Ubar + y * Fbar in the remaining variables plus y.
struct EulerRep {
  MPoly ubar, fbar, h;
};
EulerRep feynman_rep(const MPoly& u, const MPoly& f);

}  // namespace pld

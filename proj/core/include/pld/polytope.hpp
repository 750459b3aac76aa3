#pragma once

// Newton polytopes of polynomials with respect to a chosen variable block:
// exact face enumeration (all dimensions, with exposing weight vectors),
// f-vectors, lattice-normalized volumes, and initial forms.  The convention
// throughout is that a weight w exposes the face where <w, exponent> is
// MINIMAL, so inward facet normals are the facet weights.

#include <string>
#include <vector>

#include "pld/linalg.hpp"
#include "pld/mpoly.hpp"

namespace pld {

struct FaceDescriptor {
  // Exposing weight in ambient coordinates: the sum of the primitive inward
  // normals of all facets containing the face (kept unshortened), zero for
  // the whole polytope.
  std::vector<long> weight;
  int dim = 0;
  int codim = 0;                 // relative to the polytope's own dimension
  std::vector<int> point_ids;    // indices into LatticePolytope::points
};

struct LatticePolytope {
  std::vector<std::string> vars;  // exponent coordinates, in order
  std::vector<IVec> points;       // distinct support points
  int dim = -1;                   // affine dimension (-1 for empty)
};

// Support of f projected to the given variables (variables of f outside the
// list act as coefficients).  Throws on the zero polynomial.
LatticePolytope newton_polytope(const MPoly& f, const std::vector<std::string>& vars);

// All faces of the polytope: the polytope itself first (zero weight), then
// by increasing codimension, weights in lexicographic order within each
// codimension.  Vertices are included.
std::vector<FaceDescriptor> face_weights(const LatticePolytope& p);

// Face counts by dimension 0..dim-1 (the polytope itself is not counted).
std::vector<long> f_vector(const LatticePolytope& p);

// Lattice-normalized volume (d! times the Euclidean volume with respect to
// the induced lattice); a point has volume 1.
mpz_class normalized_volume(const LatticePolytope& p);

// Terms of f whose exponents (in the given variables) minimize <w, e>.
MPoly initial_form(const MPoly& f, const std::vector<std::string>& vars,
                   const std::vector<long>& w);

}  // namespace pld

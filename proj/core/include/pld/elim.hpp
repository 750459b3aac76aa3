#pragma once

// Projection of incidence varieties to parameter space: the face-scan
// pipeline that computes singular-locus defining equations for a polynomial
// with parametric coefficients.  Per face of the Newton polytope, the
// codimension-one part of the coefficient-space projection is computed
// either symbolically (block-order Groebner elimination) or numerically
// (witness points on a random line, monodromy grouping, and exact
// interpolation), and the results are merged into a deduplicated component
// list with the exposing weights recorded.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pld/graph.hpp"
#include "pld/groebner.hpp"
#include "pld/mpoly.hpp"
#include "pld/numeric.hpp"
#include "pld/polytope.hpp"

namespace pld {

// ------------------------------------------------------------ configuration

enum class ElimMethod { sym, num, automatic };

struct ElimConfig {
  ElimMethod method = ElimMethod::automatic;
  std::uint64_t seed = 2026;
  int threads = 1;

  // Numerical path.
  TrackerConfig tracker;        // seed/threads fields here are overridden
  double junk_tol = 1e-8;       // residual cut on the unsquared equations
  double torus_tol = 1e-6;      // relative cut on coordinate magnitudes
  long max_samples = 10000;     // interpolation cap; above it: degree only
  double gap_threshold = 1e8;   // singular-value ratio for a trusted fit
  double rationalize_tol = 1e-8;
  int interp_retries = 3;
  int stabilization = 8;        // monodromy quiet-loop cutoff
  int max_loops = 50;

  // Symbolic path.
  GroebnerBudget budget;
  long sym_term_limit = 16;  // auto mode: try Groebner when the face
                             // polynomial has at most this many terms

  // Euler characteristics.
  bool compute_chi = false;  // attach chi to every component found
  int chi_trials = 10;

  // Interpolation basis: exact-degree monomials when the coefficients are
  // homogeneous in the parameters.  unset = decide from the input.
  std::optional<bool> homogeneous;

  // Face filters.  The scan runs through faces in order of decreasing
  // codimension; ordinals are 1-based positions in that order.
  int codim_start = -1;    // -1: start at the deepest codimension
  long face_start = 1;     // skip faces with smaller ordinals
  bool single_face = false;            // process exactly one ordinal
  std::optional<std::vector<long>> single_weight;  // process one weight only

  std::function<void(const std::string&)> log;  // progress sink, may be null
};

// ------------------------------------------------------------ incidence

// The critical-point system of a face polynomial: the polynomial itself,
// its partial derivatives in every variable, and the torus equation
// y * (product of all variables) - 1 keeping solutions coordinate-wise
// nonzero.
struct IncidenceSystem {
  std::vector<MPoly> equations;
  std::vector<std::string> vars;  // variables ..., then the auxiliary y
  std::vector<std::string> params;
  FaceDescriptor face;
};

IncidenceSystem build_incidence(const MPoly& face_poly, const FaceDescriptor& face,
                                const std::vector<std::string>& vars,
                                const std::vector<std::string>& params);

// ------------------------------------------------------------ projection

// Witness data for one irreducible component of the incidence variety whose
// parameter-space projection is a hypersurface.
struct ComponentWitness {
  // Solution points of the sliced system at the base line, in the tracked
  // coordinates (live variables ..., line parameter t).
  std::vector<TrackedPoint> points;
  std::vector<cdouble> line_a, line_b;  // base line z = a + t b
  std::vector<cdouble> slice;           // hyperplane coefficients, flattened
  int hyperplanes = 0;                  // fiber dimension of the component
  std::vector<std::vector<cdouble>> samples;  // parameter-space samples used
};

struct ProjComponent {
  MPoly delta;        // zero when the component was left degree-only
  long degree = 0;    // number of line intersections = degree of the image
  double gap = 0.0;   // interpolation quality: sigma ratio, inf for exact
  bool interpolated = false;
  bool trusted = false;  // gap above threshold and verification passed
  ComponentWitness witness;
};

struct ProjectionResult {
  std::vector<ProjComponent> components;
  bool ladder_exhausted = false;  // singular residue at the hyperplane cap
  long failed_paths = 0;
  std::string note;
};

// Compute defining equations of all codimension-one projections of the
// irreducible components of V(equations) onto parameter space.  Dominant
// components are discarded by a tangent-space test, deeper projections are
// invisible to the random line, and fiber-positive components are reached by
// slicing with up to vars.size() generic affine hyperplanes
// (min_hyperplanes > 0 skips slice-free levels, e.g. when a scaling action
// on the variables is known).
ProjectionResult project_codim1(const std::vector<MPoly>& equations,
                                const std::vector<std::string>& params,
                                const std::vector<std::string>& vars, bool homogeneous,
                                const ElimConfig& cfg, Rng& rng, int min_hyperplanes = 0);

// ------------------------------------------------------------ face scan

enum class FaceStatus { done, skipped, unresolved, error };

struct FaceReport {
  FaceDescriptor face;
  long ordinal = 0;  // 1-based position in the scan order
  long total = 0;    // number of faces in the scan
  FaceStatus status = FaceStatus::done;
  std::vector<std::string> methods;  // which engines produced the deltas
  std::vector<MPoly> deltas;         // nonconstant factors found on this face
  std::vector<long> degrees;         // of unresolved components, if any
  std::string message;
};

struct DiscriminantComponent {
  MPoly delta;  // primitive, square-free, sign-normalized; zero if unresolved
  long degree = 0;
  std::vector<std::vector<long>> weights;  // exposing weights where found
  std::optional<long> chi;                 // |Euler characteristic| on the component
  double gap = 0.0;
  std::vector<std::string> methods;  // subset of {sym, num, closed-form}
  bool trusted = true;
};

struct PLDResult {
  std::string name;
  FeynmanGraph graph;
  MPoly U, F, G;
  std::vector<std::string> params;
  std::vector<std::string> vars;
  long chi_generic = -1;
  std::vector<long> f_vector;
  std::vector<DiscriminantComponent> components;
  std::vector<FaceReport> faces;
  bool complete = true;  // no unresolved or errored face
};

// Full pipeline for a Feynman diagram: Symanzik polynomials on the chosen
// mass subspace, face scan of Newt(U + F), per-face projection, dedup.
PLDResult get_pld(const FeynmanGraph& g, const MassSpec& masses,
                  const std::map<std::string, MPoly>& relations = {},
                  const ElimConfig& cfg = {});

// The same face-scan pipeline for an arbitrary polynomial whose coefficients
// are polynomial in the parameters.
struct SpecializedPAD {
  std::vector<DiscriminantComponent> components;
  std::vector<FaceReport> faces;
  bool complete = true;
};
SpecializedPAD specialized_pad(const MPoly& p, const std::vector<std::string>& params,
                               const std::vector<std::string>& vars,
                               const ElimConfig& cfg = {});

// ------------------------------------------------------------ Euler filter

// Check candidate factors against the Euler-characteristic drop criterion:
// sample parameters on the candidate's zero set (solve for one parameter,
// randomize the rest) and compare the torus Euler characteristic there with
// the generic value.
struct CandidateVerdict {
  bool is_component = false;
  long chi = -1;
  std::string note;  // nonempty when sampling had to fall back or failed
};
struct EulerDiscQResult {
  long chi_generic = -1;
  std::vector<CandidateVerdict> verdicts;
};
EulerDiscQResult euler_discriminant_q(const MPoly& gpoly, const std::vector<std::string>& params,
                                      const std::vector<std::string>& vars,
                                      const std::vector<MPoly>& candidates,
                                      const EulerCharConfig& cfg = {});

// ------------------------------------------------------------ presentation

// Repeated exact division of p by dictionary entries; returns the factors
// found (with multiplicity) followed by the nonconstant remainder, if any.
std::vector<MPoly> split_by_dictionary(const MPoly& p, const std::vector<MPoly>& dictionary);

// Threshold factors c - (s1 m_{e1} + ... + sk m_{ek})^2 for every channel c,
// every mass subset of size 1..max_subset, and every sign pattern up to the
// global flip.
std::vector<MPoly> threshold_dictionary(const std::vector<std::string>& channels,
                                        const std::vector<std::string>& masses,
                                        int max_subset = 3);

// Present a squared-mass-space factor in mass variables: substitute each
// squared-mass symbol by the square of its mass symbol and split by the
// threshold dictionary.  Factors that do not split are returned unchanged in
// the original symbols.
std::vector<MPoly> mass_split(const MPoly& delta,
                              const std::vector<std::pair<std::string, std::string>>& mass_of,
                              const std::vector<std::string>& channels);

}  // namespace pld

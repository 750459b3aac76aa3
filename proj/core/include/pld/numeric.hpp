#pragma once

// Numerical algebraic geometry engine: compiled polynomial systems, homotopy
// continuation (total-degree and parameter paths), monodromy solving, and
// Euler-characteristic computation by critical-point counting.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pld/mpoly.hpp"
#include "pld/rational.hpp"

namespace pld {

// Deterministic random stream: a fixed 64-bit engine plus an explicit
// Box-Muller pair cache, so identical seeds give identical draws everywhere
// (library normal distributions are not reproducible across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  cdouble cgauss();   // independent normal real/imaginary parts
  cdouble unit();     // random phase on the unit circle
  std::uint64_t raw() { return gen_(); }
  Rng fork() { return Rng(gen_()); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Run body(0..count-1) on a worker pool. Each index must be independent;
// results written by index stay deterministic regardless of thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

enum class PointStatus { regular, singular, diverged, failed };

struct TrackedPoint {
  std::vector<cdouble> coords;
  double residual = 0.0;   // max over equations of |f_i| / max(1, term scale)
  double sigma_min = 0.0;  // smallest singular value of the Jacobian
  double sigma_max = 0.0;
  PointStatus status = PointStatus::failed;
  bool regular() const { return status == PointStatus::regular; }
};

struct TrackerConfig {
  double step_tol = 1e-9;     // corrector acceptance, relative Newton step
  double newton_tol = 5e-14;  // endpoint refinement target
  double min_step = 1e-13;    // below this the path is declared failed
  int max_steps = 20000;
  cdouble gamma = cdouble(0.0, 0.0);  // zero means: draw from the stream
  std::uint64_t seed = 2026;
  int threads = 1;  // 0 = hardware concurrency
};

// A polynomial system compiled to sparse term lists over two banks of slots:
// unknowns (tracked coordinates) and parameters (bound per evaluation).
class CompiledSystem {
 public:
  CompiledSystem(const std::vector<MPoly>& eqs, std::vector<std::string> unknowns,
                 std::vector<std::string> params);

  int size() const { return static_cast<int>(terms_.size()); }
  int dim() const { return static_cast<int>(unknowns_.size()); }
  int param_count() const { return static_cast<int>(params_.size()); }
  int degree(int eq) const { return degrees_[eq]; }  // total degree in unknowns
  int max_degree() const;

  void eval(const cdouble* x, const cdouble* p, cdouble* out) const;
  // Magnitude sum of the terms of one equation (residual denominator).
  double scale(int eq, const cdouble* x, const cdouble* p) const;
  double residual(const std::vector<cdouble>& x, const std::vector<cdouble>& p) const;
  void jac_x(const cdouble* x, const cdouble* p, Eigen::MatrixXcd& jac) const;
  void jac_p(const cdouble* x, const cdouble* p, Eigen::MatrixXcd& jac) const;

  const std::vector<std::string>& unknowns() const { return unknowns_; }
  const std::vector<std::string>& params() const { return params_; }

 private:
  struct Term {
    cdouble c;
    std::vector<std::pair<int, int>> ex;  // (unknown slot, exponent)
    std::vector<std::pair<int, int>> ep;  // (parameter slot, exponent)
  };
  std::vector<std::vector<Term>> terms_;
  std::vector<std::string> unknowns_, params_;
  std::vector<int> degrees_;
};

// Newton-refine x against F(.; p) = 0 and classify the endpoint:
// regular iff relative residual < 1e-10 and sigma_min > 1e-8 * sigma_max.
TrackedPoint classify_point(const CompiledSystem& sys, const std::vector<cdouble>& p,
                            const std::vector<cdouble>& x, const TrackerConfig& cfg);

// Track one point of F(x; p0) = 0 to the system at p1 along the segment
// p(t) = (1-t) p0 + t p1. Step-size underflow gives status failed, never a
// silent result; points escaping past |x| = 1e8 are flagged diverged.
TrackedPoint track_parameter(const CompiledSystem& sys, const std::vector<cdouble>& p0,
                             const std::vector<cdouble>& p1, const std::vector<cdouble>& start,
                             const TrackerConfig& cfg);

struct SolveStats {
  int paths = 0, regular = 0, singular = 0, diverged = 0, failed = 0;
};

// All isolated solutions of a square system by a total-degree start system
// with the gamma trick. The start equations x_i^D - r_i all use the top
// total degree D of the system, so the path count is D^n. Regular endpoints
// are deduplicated by 1e-6 relative clustering; refuses D^n > 1e5.
// singular_out, when given, receives the undeduplicated singular endpoints
// (paths that converged onto positive-dimensional or multiple solutions).
std::vector<TrackedPoint> solve_total_degree(const CompiledSystem& sys,
                                             const std::vector<cdouble>& params,
                                             const TrackerConfig& cfg, Rng& rng,
                                             SolveStats* stats = nullptr,
                                             std::vector<TrackedPoint>* singular_out = nullptr);

struct MonodromyResult {
  std::vector<TrackedPoint> points;      // refined regular points at base_params
  std::vector<std::vector<int>> orbits;  // partition of point indices
  int loops = 0;
};

// Grow a solution set of F(x; base_params) = 0 by random parameter loops
// (base -> q1 -> q2 -> base) and group points into monodromy orbits.
// Stops after `stabilization` consecutive loops that neither add a point nor
// merge two orbits, or after max_loops. Throws if no seed refines to a
// regular point.
MonodromyResult monodromy_solve(const CompiledSystem& sys, const std::vector<cdouble>& base_params,
                                const std::vector<std::vector<cdouble>>& seeds,
                                const TrackerConfig& cfg, Rng& rng, int stabilization = 8,
                                int max_loops = 50);

// Points are identified when their coordinate gap is below tol relative to
// their magnitude. cluster_points returns representative indices in
// first-seen order.
bool points_close(const std::vector<cdouble>& a, const std::vector<cdouble>& b, double tol = 1e-6);
std::vector<int> cluster_points(const std::vector<std::vector<cdouble>>& pts, double tol = 1e-6);

// All roots of c[0] + c[1] x + ... + c[d] x^d via the companion matrix.
std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs);

// Cleared critical-point equations of the log-likelihood
// sum_i mu_i log f_i + sum_j nu_j log a_j on the torus complement of
// {prod f_i = 0}: for each variable a_j,
//   a_j * sum_i mu_i (df_i/da_j) prod_{l != i} f_l + nu_j prod_l f_l = 0.
std::vector<MPoly> critical_equations(const std::vector<MPoly>& factors,
                                      const std::vector<std::string>& vars,
                                      const std::vector<std::string>& mu_names,
                                      const std::vector<std::string>& nu_names);

struct EulerCharConfig {
  int trials = 10;
  std::uint64_t seed = 2026;
  TrackerConfig tracker;
};

// Signed Euler characteristic |chi| of the torus complement of
// {prod f_i = 0}, computed as the number of regular critical points of a
// generic log-likelihood. One master total-degree solve at generic complex
// parameters; each query moves the master points by a parameter homotopy and
// takes the maximum count over `trials` random exponent draws.
class EulerCharEngine {
 public:
  EulerCharEngine(std::vector<MPoly> factors, std::vector<std::string> vars,
                  std::vector<std::string> params, EulerCharConfig cfg = {});

  int chi_generic();
  int chi_at(const std::map<std::string, cdouble>& param_values);
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<std::string>& vars() const { return vars_; }

 private:
  void ensure_master();
  // One exponent draw: transport the master points to (zvals, fresh mu/nu).
  int trial_count(const std::vector<cdouble>& target, bool* degenerate);
  bool torus_ok(const std::vector<cdouble>& x, const std::vector<cdouble>& zvals) const;

  std::vector<MPoly> factors_;
  std::vector<std::string> vars_, params_;
  EulerCharConfig cfg_;
  Rng rng_;
  std::unique_ptr<CompiledSystem> sys_;   // cleared critical equations
  std::unique_ptr<CompiledSystem> fsys_;  // the factors themselves (filters)
  int mu_count_ = 0;
  std::vector<cdouble> master_params_;
  std::vector<std::vector<cdouble>> master_points_;
  bool master_ready_ = false;
};

int euler_characteristic(const std::vector<MPoly>& factors,
                         const std::map<std::string, cdouble>& param_values,
                         const std::vector<std::string>& vars, const EulerCharConfig& cfg = {});
int euler_characteristic(const MPoly& f, const std::map<std::string, cdouble>& param_values,
                         const std::vector<std::string>& vars, const EulerCharConfig& cfg = {});

}  // namespace pld

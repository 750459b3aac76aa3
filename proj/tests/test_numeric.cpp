#include "pld/numeric.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "pld/mpoly.hpp"

using namespace pld;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

double dist(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool contains_point(const std::vector<TrackedPoint>& pts, const std::vector<cdouble>& target,
                    double tol = 1e-8) {
  for (const auto& tp : pts)
    if (dist(tp.coords, target) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("compiled system: evaluation, scaling, jacobians") {
  // f = 3 x^2 y + q x - 1 with unknowns (x, y), parameter q
  CompiledSystem sys({P("3*x^2*y + q*x - 1")}, {"x", "y"}, {"q"});
  CHECK(sys.size() == 1);
  CHECK(sys.dim() == 2);
  CHECK(sys.param_count() == 1);
  CHECK(sys.degree(0) == 3);
  CHECK(sys.max_degree() == 3);

  std::vector<cdouble> x = {cdouble(2.0, 0.0), cdouble(-1.0, 0.0)};
  std::vector<cdouble> p = {cdouble(5.0, 0.0)};
  cdouble out;
  sys.eval(x.data(), p.data(), &out);
  CHECK(std::abs(out - cdouble(-3.0, 0.0)) < 1e-14);  // -12 + 10 - 1
  CHECK(sys.scale(0, x.data(), p.data()) == doctest::Approx(23.0));  // 12 + 10 + 1
  CHECK(sys.residual(x, p) == doctest::Approx(3.0 / 23.0));

  Eigen::MatrixXcd jx, jp;
  sys.jac_x(x.data(), p.data(), jx);
  CHECK(std::abs(jx(0, 0) - cdouble(-7.0, 0.0)) < 1e-13);  // 6xy + q = -12 + 5
  CHECK(std::abs(jx(0, 1) - cdouble(12.0, 0.0)) < 1e-13);  // 3x^2
  sys.jac_p(x.data(), p.data(), jp);
  CHECK(std::abs(jp(0, 0) - cdouble(2.0, 0.0)) < 1e-13);  // x

  // Zero coordinates cannot poison the derivative evaluation.
  std::vector<cdouble> x0 = {cdouble(0.0, 0.0), cdouble(4.0, 0.0)};
  sys.jac_x(x0.data(), p.data(), jx);
  CHECK(std::abs(jx(0, 0) - cdouble(5.0, 0.0)) < 1e-14);  // 6xy + q at x=0
  CHECK(std::abs(jx(0, 1)) < 1e-14);                      // 3x^2 at x=0

  CHECK_THROWS_AS(CompiledSystem({P("x + w")}, {"x"}, {"q"}), Error);      // unbound symbol
  CHECK_THROWS_AS(CompiledSystem({P("x^-1 + 1")}, {"x"}, {}), Error);      // Laurent input
  CHECK_THROWS_AS(CompiledSystem({P("x*q")}, {"x", "q"}, {"q"}), Error);   // double binding
}

TEST_CASE("parameter homotopy moves a square root") {
  CompiledSystem sys({P("x^2 - q")}, {"x"}, {"q"});
  TrackerConfig cfg;
  std::vector<cdouble> p0 = {cdouble(1.0, 0.0)}, p1 = {cdouble(4.0, 0.0)};
  TrackedPoint tp = track_parameter(sys, p0, p1, {cdouble(1.0, 0.0)}, cfg);
  REQUIRE(tp.regular());
  CHECK(std::abs(tp.coords[0] - cdouble(2.0, 0.0)) < 1e-10);

  // Other branch follows continuously as well.
  tp = track_parameter(sys, p0, p1, {cdouble(-1.0, 0.0)}, cfg);
  REQUIRE(tp.regular());
  CHECK(std::abs(tp.coords[0] - cdouble(-2.0, 0.0)) < 1e-10);
}

TEST_CASE("endpoint classification: regular vs singular") {
  CompiledSystem sys({P("x^2 - q")}, {"x"}, {"q"});
  TrackerConfig cfg;
  TrackedPoint good = classify_point(sys, {cdouble(4.0, 0.0)}, {cdouble(1.9, 0.0)}, cfg);
  CHECK(good.regular());
  CHECK(std::abs(good.coords[0] - cdouble(2.0, 0.0)) < 1e-12);

  // Double root at q = 0: zero residual but a rank-deficient Jacobian.
  TrackedPoint dbl = classify_point(sys, {cdouble(0.0, 0.0)}, {cdouble(0.0, 0.0)}, cfg);
  CHECK(dbl.status == PointStatus::singular);

  // Not a solution at all.
  CompiledSystem fixed({P("x^2 - 1")}, {"x"}, {});
  TrackedPoint junk = classify_point(fixed, {}, {cdouble(0.0, 0.0)}, cfg);
  CHECK(junk.status == PointStatus::failed);
}

TEST_CASE("total-degree solve: circle meets diagonal") {
  // Top degree 2 in two unknowns: exactly 4 start paths, two finite roots.
  CompiledSystem sys({P("x^2 + y^2 - 1"), P("x - y")}, {"x", "y"}, {});
  TrackerConfig cfg;
  Rng rng(2026);
  SolveStats stats;
  auto sols = solve_total_degree(sys, {}, cfg, rng, &stats);
  CHECK(stats.paths == 4);
  CHECK(stats.regular >= 2);
  REQUIRE(sols.size() == 2);
  const double r = std::sqrt(0.5);
  CHECK(contains_point(sols, {cdouble(r, 0.0), cdouble(r, 0.0)}));
  CHECK(contains_point(sols, {cdouble(-r, 0.0), cdouble(-r, 0.0)}));
}

TEST_CASE("total-degree solve: symmetric functions pin the root pair") {
  CompiledSystem sys({P("x + y - 3"), P("x*y - 2")}, {"x", "y"}, {});
  TrackerConfig cfg;
  Rng rng(7);
  auto sols = solve_total_degree(sys, {}, cfg, rng);
  REQUIRE(sols.size() == 2);
  CHECK(contains_point(sols, {cdouble(1.0, 0.0), cdouble(2.0, 0.0)}));
  CHECK(contains_point(sols, {cdouble(2.0, 0.0), cdouble(1.0, 0.0)}));
}

TEST_CASE("total-degree solve refuses oversized path counts") {
  std::vector<MPoly> eqs;
  std::vector<std::string> vars;
  for (int i = 1; i <= 6; ++i) {
    std::string v = "x" + std::to_string(i);
    vars.push_back(v);
    eqs.push_back(MPoly::var(v, 7) - MPoly(1L));  // 7^6 = 117649 paths
  }
  CompiledSystem sys(eqs, vars, {});
  TrackerConfig cfg;
  Rng rng(1);
  CHECK_THROWS_AS(solve_total_degree(sys, {}, cfg, rng), Error);
}

TEST_CASE("same seed, same bits, independent of thread count") {
  CompiledSystem sys({P("x^3 - 2*x + q"), P("y^2 - x")}, {"x", "y"}, {"q"});
  std::vector<cdouble> p = {cdouble(0.25, 0.125)};
  auto run = [&](int threads) {
    TrackerConfig cfg;
    cfg.threads = threads;
    Rng rng(2026);
    return solve_total_degree(sys, p, cfg, rng);
  };
  auto a = run(1), b = run(1), c = run(3);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < a[i].coords.size(); ++j) {
      // bitwise equality, not approximate
      CHECK(a[i].coords[j].real() == b[i].coords[j].real());
      CHECK(a[i].coords[j].imag() == b[i].coords[j].imag());
      CHECK(a[i].coords[j].real() == c[i].coords[j].real());
      CHECK(a[i].coords[j].imag() == c[i].coords[j].imag());
    }
  }
}

TEST_CASE("point clustering identifies nearby points") {
  std::vector<cdouble> a = {cdouble(1.0, 0.0)}, b = {cdouble(1.0 + 1e-9, 0.0)},
                       c = {cdouble(2.0, 0.0)};
  CHECK(points_close(a, b));
  CHECK_FALSE(points_close(a, c));
  auto reps = cluster_points({a, b, c});
  REQUIRE(reps.size() == 2);
  CHECK(reps[0] == 0);
  CHECK(reps[1] == 2);
  // Relative tolerance: gap 0.5 at magnitude 1e9 is the same point.
  std::vector<cdouble> big1 = {cdouble(1e9, 0.0)}, big2 = {cdouble(1e9 + 0.5, 0.0)};
  CHECK(points_close(big1, big2));
}

TEST_CASE("polynomial roots via companion matrix") {
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
  auto roots = polynomial_roots({cdouble(-6, 0), cdouble(11, 0), cdouble(-6, 0), cdouble(1, 0)});
  REQUIRE(roots.size() == 3);
  std::vector<double> re;
  for (auto& r : roots) {
    CHECK(std::abs(r.imag()) < 1e-8);
    re.push_back(r.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1.0));
  CHECK(re[1] == doctest::Approx(2.0));
  CHECK(re[2] == doctest::Approx(3.0));

  // Trailing zero coefficients are trimmed: 2x + 2 + 0 x^2.
  roots = polynomial_roots({cdouble(2, 0), cdouble(2, 0), cdouble(0, 0)});
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - cdouble(-1.0, 0.0)) < 1e-12);

  CHECK(polynomial_roots({cdouble(5, 0)}).empty());
  CHECK_THROWS_AS(polynomial_roots({cdouble(0, 0)}), Error);
}

TEST_CASE("monodromy discovers the full fiber of a square root") {
  CompiledSystem sys({P("x^2 - q")}, {"x"}, {"q"});
  TrackerConfig cfg;
  Rng rng(2026);
  std::vector<cdouble> base = {cdouble(2.0, 1.0)};
  // One branch as the only seed; the loop around q = 0 finds the other.
  cdouble root = std::sqrt(base[0]);
  auto res = monodromy_solve(sys, base, {{root}}, cfg, rng);
  CHECK(res.points.size() == 2);
  REQUIRE(res.orbits.size() == 1);
  CHECK(res.orbits[0].size() == 2);

  // A seed that refines to nothing regular is an error, not a guess.
  CHECK_THROWS_AS(monodromy_solve(sys, base, {{cdouble(0.0, 0.0)}}, cfg, rng), Error);
}

TEST_CASE("critical equations of a log-likelihood") {
  // Single factor f = 1 + x + y: a_j f'_j a-scaled plus nu_j f.
  auto eqs =
      critical_equations({P("1 + x + y")}, {"x", "y"}, {"mu"}, {"nu1", "nu2"});
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[0] == P("mu*x + nu1*(1 + x + y)"));
  CHECK(eqs[1] == P("mu*y + nu2*(1 + x + y)"));

  // Two factors: the cleared form multiplies through by the complement.
  auto two = critical_equations({P("x"), P("1 + x")}, {"x"}, {"mu1", "mu2"}, {"nu"});
  REQUIRE(two.size() == 1);
  CHECK(two[0] == P("mu1*x*(1+x) + mu2*x*x + nu*x*(1+x)"));

  CHECK_THROWS_AS(critical_equations({}, {"x"}, {}, {"nu"}), Error);
  CHECK_THROWS_AS(critical_equations({P("x")}, {"x"}, {"mu1", "mu2"}, {"nu"}), Error);
}

TEST_CASE("euler characteristic: one-variable warmup") {
  // f = 1 - x on the punctured line: complement of {0, 1} in C has chi -1,
  // one critical point of mu log(1-x) + nu log x.
  EulerCharConfig cfg;
  cfg.trials = 3;
  int chi = euler_characteristic(P("1 - x"), {}, {"x"}, cfg);
  CHECK(chi == 1);
}

TEST_CASE("euler characteristic of the bubble graph polynomial") {
  // G = U + F for the two-edge one-loop graph, generic kinematics.
  MPoly G = P("x1 + x2 + (s - m1 - m2)*x1*x2 - m1*x1^2 - m2*x2^2");
  EulerCharConfig cfg;
  cfg.trials = 4;
  std::map<std::string, cdouble> vals = {
      {"s", cdouble(7.0, 0.0)}, {"m1", cdouble(3.0, 0.0)}, {"m2", cdouble(5.0, 0.0)}};
  CHECK(euler_characteristic(G, vals, {"x1", "x2"}, cfg) == 3);
}

TEST_CASE("euler characteristic of the three-edge banana") {
  MPoly U = P("x1*x2 + x1*x3 + x2*x3");
  MPoly G = P("(1 - m1*x1 - m2*x2 - m3*x3)*(x1*x2 + x1*x3 + x2*x3) + s*x1*x2*x3");
  EulerCharConfig cfg;
  cfg.trials = 4;
  std::map<std::string, cdouble> generic = {{"m1", cdouble(2.0, 0.0)},
                                            {"m2", cdouble(3.0, 0.0)},
                                            {"m3", cdouble(5.0, 0.0)},
                                            {"s", cdouble(11.0, 0.0)}};
  EulerCharEngine engine({G}, {"x1", "x2", "x3"}, {"m1", "m2", "m3", "s"}, cfg);
  CHECK(engine.chi_generic() == 7);
  CHECK(engine.chi_at(generic) == 7);

  // On the m1 = 0 stratum the count drops.
  std::map<std::string, cdouble> stratum = generic;
  stratum["m1"] = cdouble(0.0, 0.0);
  CHECK(engine.chi_at(stratum) == 4);

  // The pair (U, F) dehomogenized at x3 = 1, in one fewer variable, gives
  // the full count divided by |deg U - deg F| = 1.
  MPoly Ubar = P("x1*x2 + x1 + x2");
  MPoly Fbar = P("s*x1*x2 - (m1*x1 + m2*x2 + m3)*(x1*x2 + x1 + x2)");
  EulerCharConfig cfg2;
  cfg2.trials = 4;
  int chi_pair = euler_characteristic(std::vector<MPoly>{Ubar, Fbar}, generic, {"x1", "x2"}, cfg2);
  CHECK(chi_pair == 7);
  (void)U;
}

TEST_CASE("euler characteristic: monomial factor gives zero") {
  EulerCharConfig cfg;
  cfg.trials = 2;
  CHECK(euler_characteristic(P("x1*x2"), {}, {"x1", "x2"}, cfg) == 0);
}

TEST_CASE("euler characteristic is seed independent") {
  MPoly G = P("x1 + x2 + (s - m1 - m2)*x1*x2 - m1*x1^2 - m2*x2^2");
  std::map<std::string, cdouble> vals = {
      {"s", cdouble(13.0, 0.0)}, {"m1", cdouble(2.0, 0.0)}, {"m2", cdouble(7.0, 0.0)}};
  EulerCharConfig a, b;
  a.trials = b.trials = 3;
  a.seed = 2026;
  b.seed = 424242;
  CHECK(euler_characteristic(G, vals, {"x1", "x2"}, a) ==
        euler_characteristic(G, vals, {"x1", "x2"}, b));
}

TEST_CASE("monodromy recovers all critical points from one seed") {
  // Critical equations of the three-edge banana at generic parameters:
  // the master solve finds seven points; a single seed plus loops in the
  // (z, mu, nu) parameters recovers all of them.
  MPoly G = P("(1 - m1*x1 - m2*x2 - m3*x3)*(x1*x2 + x1*x3 + x2*x3) + s*x1*x2*x3");
  auto eqs = critical_equations({G}, {"x1", "x2", "x3"}, {"mu"}, {"nu1", "nu2", "nu3"});
  CompiledSystem sys(eqs, {"x1", "x2", "x3"},
                     {"m1", "m2", "m3", "s", "mu", "nu1", "nu2", "nu3"});
  TrackerConfig cfg;
  Rng rng(2026);
  std::vector<cdouble> base;
  for (int i = 0; i < 8; ++i) base.push_back(rng.cgauss());
  auto all = solve_total_degree(sys, base, cfg, rng);
  REQUIRE(all.size() >= 7);
  // Keep only torus points (no vanishing coordinate).
  std::vector<std::vector<cdouble>> torus;
  for (auto& tp : all) {
    bool ok = true;
    for (auto& c : tp.coords) ok = ok && std::abs(c) > 1e-6;
    if (ok) torus.push_back(tp.coords);
  }
  REQUIRE(torus.size() == 7);

  auto res = monodromy_solve(sys, base, {torus[0]}, cfg, rng);
  CHECK(res.points.size() == 7);
}

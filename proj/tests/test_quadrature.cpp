#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "plectic/scenarios.hpp"

using namespace plectic;

namespace {
Expr X(int i) { return Expr::var(i); }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  Vec n, w;
  gauss_legendre(8, n, w);
  double s = 0, s14 = 0;
  for (int i = 0; i < 8; ++i) {
    s += w[static_cast<std::size_t>(i)];
    s14 += w[static_cast<std::size_t>(i)] * std::pow(n[static_cast<std::size_t>(i)], 14);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s14 == doctest::Approx(2.0 / 15).epsilon(1e-13));  // int x^14 on [-1,1]
}

TEST_CASE("product integrals on tori and spheres") {
  // T^2 area
  auto t2 = make_chart("t2", {{"theta", 0, 2 * M_PI, true}, {"phi", 0, 2 * M_PI, true}});
  FormField area = make_form(t2, 2);
  coeff(area, {0, 1}) = Expr(1.0);
  auto g = QuadratureGrid::for_chart(*t2, 32, 16);
  CHECK(integrate(area, g) == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-13));

  // S^2 area in cylindrical coordinates
  auto s2 = make_chart("s2", {{"theta", 0, 2 * M_PI, true}, {"z", -1, 1, false}});
  FormField a2 = make_form(s2, 2);
  coeff(a2, {0, 1}) = Expr(1.0);
  CHECK(integrate(a2, QuadratureGrid::for_chart(*s2, 32, 16)) ==
        doctest::Approx(4 * M_PI).epsilon(1e-13));

  // Stokes: an exact form integrates to zero over the closed product;
  // beta = (1 - z^2) dtheta ^ dphi extends over the poles
  auto s2s1 = make_chart("s2s1", {{"theta", 0, 2 * M_PI, true},
                                  {"z", -1, 1, false},
                                  {"phi", 0, 2 * M_PI, true}});
  FormField beta = make_form(s2s1, 2);
  coeff(beta, {0, 2}) = Expr(1.0) - pow(X(1), 2);
  FormField dbeta = exterior_derivative(beta);
  CHECK(std::abs(integrate(dbeta, QuadratureGrid::for_chart(*s2s1, 32, 16))) <= 1e-10);

  // degree mismatch is rejected
  CHECK_THROWS_AS(integrate(beta, QuadratureGrid::for_chart(*s2s1, 8, 8)), std::invalid_argument);
}

TEST_CASE("quadrature converges under node doubling") {
  auto s2 = make_chart("s2", {{"theta", 0, 2 * M_PI, true}, {"z", -1, 1, false}});
  FormField f = make_form(s2, 2);
  coeff(f, {0, 1}) = sin(X(0)) * sin(X(0)) * exp(X(1));
  double v1 = integrate(f, QuadratureGrid::for_chart(*s2, 24, 24));
  double v2 = integrate(f, QuadratureGrid::for_chart(*s2, 48, 48));
  CHECK(std::abs(v1 - v2) <= 1e-9 * std::abs(v2));
}

TEST_CASE("monte carlo fallback agrees with the product rule") {
  auto s2 = make_chart("s2", {{"theta", 0, 2 * M_PI, true}, {"z", -1, 1, false}});
  auto fn = [](const Vec& x) { return std::exp(x[1]) + std::sin(x[0]); };
  double exact = integrate_fn(*s2, QuadratureGrid::for_chart(*s2, 32, 32), fn);
  QuadratureGrid mc;
  mc.monte_carlo = MonteCarloRule{200000, 424242};
  double est = integrate_fn(*s2, mc, fn);
  CHECK(std::abs(est - exact) <= 0.02 * std::abs(exact));
  // deterministic for a fixed seed
  CHECK(integrate_fn(*s2, mc, fn) == est);
}

TEST_CASE("stationary-phase gap shrinks as the grid is refined") {
  ScenarioParams p;
  p.with_circle = false;
  Scenario s = build_scenario("s2_x_torus", p);
  QuadratureGrid coarse = QuadratureGrid::for_chart(*s.M.chart, 4, 4);
  QuadratureGrid fine = QuadratureGrid::for_chart(*s.M.chart, 12, 12);
  auto rc = stationary_phase_compare(*s.localization, {2.0}, coarse);
  auto rf = stationary_phase_compare(*s.localization, {2.0}, fine);
  CHECK(rf.max_rel_gap < rc.max_rel_gap);
  CHECK(rc.max_rel_gap > 1e-10);  // the coarse grid is genuinely coarse
}

TEST_CASE("pairwise summation is chunk-stable") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> v(10000);
  for (auto& x : v) x = d(rng);
  std::vector<double> v2 = v;
  double s1 = pairwise_sum(v);
  // the grid path sums the same data in fixed chunks; emulate and compare
  std::vector<double> chunks;
  for (std::size_t i = 0; i < v2.size(); i += 4096) {
    std::vector<double> part(v2.begin() + static_cast<long>(i),
                             v2.begin() + static_cast<long>(std::min(v2.size(), i + 4096)));
    chunks.push_back(pairwise_sum(part));
  }
  double s2 = pairwise_sum(chunks);
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-15));
}

TEST_CASE("parallel and serial integration agree bitwise") {
  auto s2s1 = make_chart("s2s1", {{"theta", 0, 2 * M_PI, true},
                                  {"z", -1, 1, false},
                                  {"phi", 0, 2 * M_PI, true}});
  QuadratureGrid g = QuadratureGrid::for_chart(*s2s1, 32, 24);
  auto fn = [](const Vec& x) { return std::exp(x[1]) * std::cos(x[0]) * std::cos(x[0]); };
  double a = integrate_fn(*s2s1, g, fn, false);
  double b = integrate_fn(*s2s1, g, fn, true);
  CHECK(a == b);  // bitwise
}

TEST_CASE("stationary phase on the plain sphere: 4 pi sin(t)/t") {
  ScenarioParams p;
  p.with_circle = false;
  Scenario s = build_scenario("s2_x_torus", p);
  REQUIRE(s.localization.has_value());
  auto rep = stationary_phase_compare(*s.localization, {0.5, 1.0, 2.0}, s.localization->grid);
  REQUIRE(rep.ok());
  for (const auto& row : rep.rows) {
    double expect = 4 * M_PI * std::sin(row.t) / row.t;
    CHECK(row.lhs.real() == doctest::Approx(expect).epsilon(1e-9));
    CHECK(std::abs(row.lhs.imag()) <= 1e-9);
    CHECK(row.rhs.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.rel_gap <= 1e-8);
  }
  // t -> 0+ limit recovers the total measure 4 pi
  auto rep0 = stationary_phase_compare(*s.localization, {1e-6}, s.localization->grid);
  CHECK(rep0.rows.front().lhs.real() == doctest::Approx(4 * M_PI).epsilon(1e-6));
}

TEST_CASE("stationary phase on s2 x s1: 8 pi^2 sin(t)/t") {
  Scenario s = build_scenario("s2_x_torus");
  auto rep = stationary_phase_compare(*s.localization, {0.7}, s.localization->grid);
  REQUIRE(rep.ok());
  double expect = 8 * M_PI * M_PI * std::sin(0.7) / 0.7;
  CHECK(rep.rows.front().lhs.real() == doctest::Approx(expect).epsilon(1e-9));
  CHECK(rep.rows.front().rhs.real() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.max_rel_gap <= 1e-8);
}

TEST_CASE("stationary phase on the rotated product of spheres") {
  Scenario s = build_scenario("product_spheres_torus");
  auto rep = stationary_phase_compare(*s.localization, {0.9}, s.localization->grid);
  REQUIRE(rep.ok());
  // closed form: 16 pi^2 sin(t)/t with the unit-period circle factor
  double expect = 16 * M_PI * M_PI * std::sin(0.9) / 0.9;
  CHECK(rep.rows.front().lhs.real() == doctest::Approx(expect).epsilon(1e-8));
  CHECK(rep.max_rel_gap <= 1e-8);
}

TEST_CASE("gaussian identities") {
  // ell = 1, t = 1, y = 0: both sides equal 1
  auto rep = gaussian_check(1, 1.0, {0.0});
  CHECK(rep.part_i_lhs == doctest::Approx(1.0));
  CHECK(rep.part_ii_lhs == doctest::Approx(1.0));
  CHECK(rep.part_i_gap <= 1e-10);
  CHECK(rep.part_ii_gap <= 1e-10);

  auto rep2 = gaussian_check(2, 0.3, {1.5, -0.4});
  CHECK(rep2.part_i_gap <= 1e-8);
  CHECK(rep2.part_ii_gap <= 1e-8);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (int ell : {1, 2, 3})
    for (double t : {0.3, 1.0, 3.0}) {
      Vec y(static_cast<std::size_t>(ell));
      for (auto& v : y) v = d(rng);
      auto r = gaussian_check(ell, t, y);
      CAPTURE(ell);
      CAPTURE(t);
      CHECK(r.max_gap() <= 1e-7);
    }
}

TEST_CASE("heat kernel integral: plateau, large-t, and metric scaling") {
  Scenario s = build_scenario("product_spheres_torus");
  const auto& L = *s.localization;
  double I = heat_kernel_I(L, 0.05, L.grid);
  // the exact value carries the erf tail of the tube; the plateau is reached
  // to 1e-3 by t = 0.02
  double expect = 8 * M_PI * M_PI * std::erf(1.0 / (2 * std::sqrt(0.05)));
  CHECK(I == doctest::Approx(expect).epsilon(1e-9));
  double I02 = heat_kernel_I(L, 0.02, L.grid);
  CHECK(std::abs(I02 - 8 * M_PI * M_PI) <= 1e-3 * 8 * M_PI * M_PI);

  // very large t: the kernel flattens to (4 pi t)^{-1/2} int e^sigma eta
  double I100 = heat_kernel_I(L, 100.0, L.grid);
  Expr measure = measure_top_coefficient(L.M, L.sigma, L.split.eta);
  double total = integrate_fn(*L.M.chart, L.grid, [&](const Vec& x) { return measure.eval(x); });
  double asym = std::pow(4 * M_PI * 100.0, -0.5) * total;
  CHECK(I100 == doctest::Approx(asym).epsilon(1e-3));

  // scaling the algebra metric by c^2 rescales |nu| accordingly
  LocalizationScenario L2 = L;
  L2.action.algebra.metric = Eigen::MatrixXd::Identity(1, 1) * 4.0;  // |xi|^2 doubles twice
  double I2 = heat_kernel_I(L2, 0.05, L2.grid);
  // dual metric scales |nu|^2 by 1/4: same as evaluating at t' = 4t up to the
  // (4 pi t)^{-1/2} prefactor ratio
  double Iprime = heat_kernel_I(L, 0.2, L.grid);
  CHECK(I2 == doctest::Approx(Iprime * std::pow(0.2 / 0.05, 0.5)).epsilon(1e-10));
}

TEST_CASE("localization: plateau and exponential decay") {
  Scenario s = build_scenario("product_spheres_torus");
  REQUIRE(s.reduced_data.has_value());
  std::vector<double> tgrid{0.02, 0.04, 0.07, 0.1, 0.14, 0.2};
  auto rep = localization_compare(*s.localization, *s.reduced_data, tgrid,
                                  s.localization->grid, 0.05, 0.1);
  CAPTURE(rep.failure);
  CHECK(rep.ok());
  CHECK(rep.I_values.front() == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-3));
  for (double rhs : rep.rhs_values) CHECK(rhs == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-10));
  CHECK(rep.fitted_slope <= -0.24);
  CHECK(rep.fitted_slope <= rep.slope_bound);
  CHECK(rep.lemma_gap <= 1e-6);

  // decay oracle: |D(t)| = 8 pi^2 erfc(1/(2 sqrt t))
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    double expect = 8 * M_PI * M_PI * std::erfc(1.0 / (2 * std::sqrt(tgrid[i])));
    CHECK(std::abs(rep.D_values[i]) == doctest::Approx(expect).epsilon(1e-6));
  }

  // shrinking the declared delta can only loosen the passing bound
  LocalizationScenario L2 = *s.localization;
  L2.delta = 0.5;
  auto rep2 = localization_compare(L2, *s.reduced_data, tgrid, L2.grid, 0.05, 0.1);
  CHECK(rep2.slope_bound >= rep.slope_bound);
  CHECK(rep2.decay_ok);
}

TEST_CASE("localization requires a circle group and reduction data") {
  ScenarioParams p;
  p.ell = 1;
  p.torus_rank = 2;
  Scenario s = build_scenario("power_sigma_ell", p);
  LocalizationScenario L;
  L.M = s.M;
  L.action = s.action;
  L.split = *s.split;
  L.sigma = *s.sigma;
  L.grid = QuadratureGrid::for_chart(*s.M.chart, 8, 8);
  ReducedSpaceData none;
  auto rep = localization_compare(L, none, {0.1}, L.grid);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failure == "circle group required");
}

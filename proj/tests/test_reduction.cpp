#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "plectic/scenarios.hpp"

using namespace plectic;

TEST_CASE("hopf presentation passes the hypothesis suite") {
  Scenario s = build_scenario("hopf_c2");
  auto rep = check_basic(*s.presentation, 40, 1e-8);
  CAPTURE(rep.violated_hypothesis);
  CHECK(rep.ok());
  CHECK(rep.phi_closed_defect <= 1e-12);
  CHECK(rep.level_identity_defect <= 1e-10);
  CHECK(rep.field_restriction_defect <= 1e-10);
  CHECK(rep.horizontality_defect <= 1e-10);
  CHECK(rep.invariance_defect <= 1e-10);
  CHECK(rep.submersion_min_sv > 0.5);
}

TEST_CASE("corrupted level form fails naming the closedness hypothesis") {
  ScenarioParams p;
  p.corrupt_phi = true;
  Scenario s = build_scenario("hopf_c2", p);
  auto rep = check_basic(*s.presentation, 30, 1e-8);
  CHECK_FALSE(rep.ok());
  CHECK(rep.violated_hypothesis == "phi_not_closed");
  CHECK(rep.phi_closed_defect > 1e-3);
}

TEST_CASE("trivial group: reduction is the identity") {
  // A presentation with no symmetry at all: N = B = M for a small torus.
  auto t2 = make_chart("t2", {{"a", 0, 2 * M_PI, true}, {"b", 0, 2 * M_PI, true}});
  FormField w = make_form(t2, 2);
  coeff(w, {0, 1}) = Expr(1.0);
  ReductionPresentation P;
  P.ambient = make_plectic(t2, w);
  P.action.algebra = abelian_algebra(0, "trivial");
  P.level_chart = t2;
  P.embed = ChartMap{t2, t2, {Expr::var(0), Expr::var(1)}};
  P.base_chart = t2;
  P.quotient = ChartMap{t2, t2, {Expr::var(0), Expr::var(1)}};
  P.section = ChartMap{t2, t2, {Expr::var(0), Expr::var(1)}};
  P.section2 = P.section;
  auto rep = check_basic(P, 20, 1e-9);
  CHECK(rep.ok());
  auto red = reduced_form_report(P, 1e-9, 20, 1);
  CHECK(red.ok);
  std::mt19937_64 rng(7);
  FormField iomega = pullback(P.embed, P.ambient.omega);
  DescentValue v = descend_at(P, iomega, {0.4, 1.2}, rng);
  CHECK(v.value.at(mask_of({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("hopf reduced form: residuals and the area law") {
  for (double lam : {0.5, 1.0, 1.5}) {
    ScenarioParams p;
    p.lambda = lam;
    Scenario s = build_scenario("hopf_c2", p);
    const ReductionPresentation& P = *s.presentation;
    auto rep = reduced_form_report(P, 1e-8, 30, 42);
    CHECK(rep.descent_residual <= 1e-8);
    CHECK(rep.closed_residual <= 1e-8);
    CHECK(rep.section_consistency <= 1e-8);

    // integral over the base cycle equals 4 pi^2 lambda (the k = 1 slice of
    // the classical reduced-volume statement)
    FormField iomega = pullback(P.embed, P.ambient.omega);
    CycleSpec top;
    top.axes = {0, 1, 2};
    top.fixed = {0.0, 0.0, 0.0};
    auto rng = std::make_shared<std::mt19937_64>(11);
    double integral = integrate_cycle(P.base_chart, top, [&](const Vec& b) {
      return descend_at(P, iomega, b, *rng).value;
    });
    CHECK(integral == doctest::Approx(4 * M_PI * M_PI * lam).epsilon(1e-6));

    // pointwise reduced form matches the closed-form expression
    // 2 lambda sin(u) cos(u) du ^ dpsi ^ dphi
    std::mt19937_64 r2(3);
    for (const Vec& b : P.base_chart->samples(15)) {
      DescentValue v = descend_at(P, iomega, b, r2);
      double expect = 2 * lam * std::sin(b[0]) * std::cos(b[0]);
      CHECK(v.value.at(mask_of({0, 1, 2})) == doctest::Approx(expect).epsilon(1e-9));
      CHECK(v.lift_discrepancy <= 1e-9);
    }
  }
}

TEST_CASE("s2_x_torus interior level: the reduced form vanishes by degree") {
  Scenario s = build_scenario("s2_x_torus");
  const ReductionPresentation& P = *s.presentation;
  auto basic = check_basic(P, 30, 1e-8);
  CHECK(basic.ok());
  FormField iomega = pullback(P.embed, P.ambient.omega);
  // degree 3 on a 2-dimensional level chart: identically the zero tensor
  CHECK(!iomega.f.stored());
  std::mt19937_64 rng(5);
  DescentValue v = descend_at(P, iomega, {1.0}, rng);
  CHECK(!v.value.stored());
  CHECK(v.lift_discrepancy == 0.0);
}

TEST_CASE("product spheres level 0: basic suite and reduced data") {
  Scenario s = build_scenario("product_spheres_torus");
  const ReductionPresentation& P = *s.presentation;
  auto rep = check_basic(P, 40, 1e-8);
  CAPTURE(rep.violated_hypothesis);
  CHECK(rep.ok());
  auto red = reduced_form_report(P, 1e-8, 30, 9);
  CHECK(red.ok);
  CHECK(red.closed_residual <= 1e-10);
  // sigma0 = dtheta2 ^ dz2 and eta0 = dphi descend on the nose
  FormField isigma = pullback(P.embed, *s.sigma);
  std::mt19937_64 rng(17);
  for (const Vec& b : P.base_chart->samples(10)) {
    DescentValue v = descend_at(P, isigma, b, rng);
    CHECK(v.value.at(mask_of({0, 1})) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(v.value.at(mask_of({0, 2}))) <= 1e-10);
  }
  auto etarep = descend_eta(P, s.split->eta, 1e-8);
  CHECK(etarep.ok);
  CHECK(etarep.horizontal_defect <= 1e-12);
  for (const Vec& b : P.base_chart->samples(6)) {
    AlternatingForm e = etarep.eta_at(b);
    CHECK(e.at(mask_of({2})) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("hopf eta descends to the base circle factor") {
  Scenario s = build_scenario("hopf_c2");
  auto rep = descend_eta(*s.presentation, s.split->eta, 1e-8);
  CHECK(rep.ok);
  CHECK(rep.closed_defect <= 1e-12);
  for (const Vec& b : s.presentation->base_chart->samples(8)) {
    AlternatingForm e = rep.eta_at(b);
    CHECK(e.at(mask_of({2})) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(e.at(mask_of({0}))) <= 1e-10);
  }
}

TEST_CASE("reduce dynamics: hopf commuting pathway gives zero reduced data") {
  Scenario s = build_scenario("hopf_c2");
  Expr nu = s.split->nu.front();
  for (bool linear : {true, false}) {
    Expr h = linear ? nu : nu * nu;
    FormField alpha = h * s.split->eta;
    HamiltonianForm a = hamiltonian_field(s.M, alpha, 1, 1e-9);
    REQUIRE(a.hamiltonian);
    auto rep = reduce_dynamics(*s.presentation, a, ReduceDynamicsMode::commuting, 1e-7);
    CAPTURE(rep.failure);
    CHECK(rep.ok());
    CHECK(rep.identity_defect <= 1e-8);
    CHECK(rep.welldef_defect <= 1e-8);
    // the generator descends to zero
    std::mt19937_64 rng(23);
    Vec b{0.7, 1.1, 2.0};
    Vec x = s.presentation->section.eval(b);
    Vec y = s.presentation->embed.eval(x);
    MultiVector X = a.field_at(y);
    // tangency solve against the embedding, then push by the quotient
    (void)X;
    (void)rng;
  }
}

TEST_CASE("reduce dynamics: invariant 2-vector on the product") {
  Scenario s = build_scenario("product_spheres_torus");
  VecField X = make_vecfield(s.M.chart, 2);
  coeff(X, {2, 4}) = Expr(1.0);
  FormField alpha = scalar_field(s.M.chart, Expr(0.0) - Expr::var(3));
  HamiltonianForm a = hamiltonian_field(s.M, alpha, 2, 1e-9, X);
  REQUIRE(a.hamiltonian);
  auto rep = reduce_dynamics(*s.presentation, a, ReduceDynamicsMode::invariant_tangent, 1e-7);
  CAPTURE(rep.failure);
  CHECK(rep.ok());
  CHECK(rep.precondition_defect <= 1e-12);
  CHECK(rep.tangency_defect <= 1e-10);
  CHECK(rep.welldef_defect <= 1e-10);
  CHECK(rep.identity_defect <= 1e-7);
}

TEST_CASE("reduce dynamics rejects non-tangent fields") {
  Scenario s = build_scenario("product_spheres_torus");
  // d/dz1 is invariant but transverse to the level set
  VecField X = make_vecfield(s.M.chart, 1);
  coeff(X, {1}) = Expr(1.0);
  FormField alpha = make_form(s.M.chart, 1);
  // iota_{d/dz1} omega = -dtheta1 ^ dphi, not exact against our alpha; use
  // the honest hamiltonian form: d alpha = iota_X omega has a closed-form
  // solution alpha = -theta1 dphi only locally; instead test the tangency
  // failure path directly with the generator of translations in z1 packaged
  // with its true hamiltonian data on a sub-box.
  coeff(alpha, {4}) = Expr(0.0) - Expr::var(0);
  HamiltonianForm a;
  a.alpha = alpha;
  a.ell = 1;
  a.field = X;
  a.field_at = [X](const Vec& x) { return eval_field(X, x); };
  a.hamiltonian = true;
  auto rep = reduce_dynamics(*s.presentation, a, ReduceDynamicsMode::invariant_tangent, 1e-7);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failure == "X not tangent to level set");
}

TEST_CASE("hopf connection, normalization, chern pairing") {
  Scenario s = build_scenario("hopf_c2");
  auto rep = connection_and_curvature(*s.presentation, *s.sigma, s.split->eta, s.tstar_fields,
                                      1e-6, s.chern_cycles);
  CHECK(rep.conjugacy == ConjugacyVerdict::strongly_conjugate);
  CHECK(rep.normalization_defect <= 1e-9);
  CHECK(rep.factorization_defect <= 1e-9);
  CHECK(rep.basic_defect <= 1e-9);
  REQUIRE(rep.chern_pairings.size() == 1);
  CHECK(rep.chern_pairings[0] == doctest::Approx(1.0).epsilon(1e-6));
  // connection on the level set matches dgamma + sin^2 u dpsi
  const FormField& alpha = rep.connection_on_level.front();
  for (const Vec& x : s.presentation->level_chart->samples(10)) {
    AlternatingForm v = eval_form(alpha, x);
    CHECK(v.at(mask_of({2})) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v.at(mask_of({1})) == doctest::Approx(std::sin(x[0]) * std::sin(x[0])).epsilon(1e-9));
  }
  // curvature pointwise: sin(2u) du ^ dpsi
  for (const Vec& b : s.presentation->base_chart->samples(10)) {
    AlternatingForm F = rep.curvature_at(b);
    CHECK(F.at(mask_of({0, 1})) == doctest::Approx(std::sin(2 * b[0])).epsilon(1e-8));
  }
}

TEST_CASE("product spheres level 0 has a flat connection") {
  Scenario s = build_scenario("product_spheres_torus");
  CycleSpec c2;
  c2.axes = {0, 1};
  c2.fixed = {0.0, 0.0, 0.25};
  auto rep = connection_and_curvature(*s.presentation, *s.sigma, s.split->eta, s.tstar_fields,
                                      1e-6, {c2});
  CHECK(rep.conjugacy == ConjugacyVerdict::strongly_conjugate);
  CHECK(rep.normalization_defect <= 1e-10);
  REQUIRE(rep.chern_pairings.size() == 1);
  CHECK(std::abs(rep.chern_pairings[0]) <= 1e-9);
  for (const Vec& b : s.presentation->base_chart->samples(8))
    CHECK(frobenius(rep.curvature_at(b)) <= 1e-10);
}

TEST_CASE("hopf variation: slope, prediction, and the pointwise identity") {
  Scenario s = build_scenario("hopf_c2");
  auto rep = variation_slope(*s.family, 1e-6, 99);
  CAPTURE(rep.failure);
  CHECK(rep.ok());
  const double slope_expect = 4 * M_PI * M_PI;
  CHECK(std::abs(rep.slope - slope_expect) <= 0.01 * slope_expect);
  CHECK(rep.relative_gap <= 0.01);
  CHECK(rep.chern_pairing == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.eta_integral == doctest::Approx(2 * M_PI).epsilon(1e-9));
  CHECK(rep.fit_residual <= 1e-6 * slope_expect);
  CHECK(rep.lemma_variation_defect <= 1e-6);
  // p(lambda) itself is linear: spot check endpoints
  CHECK(rep.p_values.front() == doctest::Approx(4 * M_PI * M_PI * 0.5).epsilon(1e-6));
  CHECK(rep.p_values.back() == doctest::Approx(4 * M_PI * M_PI * 1.5).epsilon(1e-6));
}

TEST_CASE("diagonal product-spheres family: slope against the pushforward oracle") {
  ScenarioParams p;
  p.mode = "diagonal";
  Scenario s = build_scenario("product_spheres_torus", p);
  auto rep = variation_slope(*s.family, 1e-6, 7);
  CAPTURE(rep.failure);
  CHECK(rep.ok());
  CHECK(rep.relative_gap <= 0.01);
  CHECK(rep.lemma_variation_defect <= 1e-6);

  // Monte Carlo pushforward oracle for the level volume: sample (z1, z2)
  // uniformly, estimate the density of z1 + z2 at lambda; the signed reduced
  // volume in our chart orientation is -2 pi (2 - lambda), slope +2 pi.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-1, 1);
  const int nmc = 400000;
  auto density = [&](double lam, double band) {
    int hits = 0;
    for (int i = 0; i < nmc; ++i) {
      double z = d(rng) + d(rng);
      if (std::abs(z - lam) < band) ++hits;
    }
    return 4.0 * hits / (nmc * 2 * band);  // measure on the square is 4
  };
  double mc_slope =
      2 * M_PI * (density(1.3, 0.02) - density(0.7, 0.02)) / 0.6;  // of 2 pi (2 - lam)
  // chart orientation makes the measured slope the negative of the volume slope
  CHECK(std::abs(rep.slope + mc_slope) <= 0.05 * std::abs(mc_slope) + 0.05);
  CHECK(rep.slope == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(rep.chern_pairing == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.eta_integral == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("uniqueness of descent across lift strategies") {
  Scenario s = build_scenario("hopf_c2");
  const ReductionPresentation& P = *s.presentation;
  FormField iomega = pullback(P.embed, P.ambient.omega);
  std::mt19937_64 r1(100), r2(9999);
  for (const Vec& b : P.base_chart->samples(12)) {
    DescentValue v1 = descend_at(P, iomega, b, r1);
    DescentValue v2 = descend_at(P, iomega, b, r2);
    for (std::size_t q = 0; q < v1.value.c.size(); ++q)
      CHECK(std::abs(v1.value.c[q] - v2.value.c[q]) <= 1e-8);
  }
}

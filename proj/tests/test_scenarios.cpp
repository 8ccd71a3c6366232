#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "oracles.hpp"
#include "plectic/scenarios.hpp"

using namespace plectic;

namespace {

// Unit quaternion helpers for the SU(2) oracles. An algebra element xi (in
// the basis with [e_i, e_j] = eps_ijk e_k) corresponds to the quaternion
// (0, xi/2); exponential coordinates x map to qexp((0, x/2)).
using Quat = std::array<double, 4>;  // (w, x, y, z)

Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

Quat qexp_coords(const Vec& x) {
  double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  double h = r / 2;
  double s = r > 1e-14 ? std::sin(h) / r : 0.5;
  return {std::cos(h), s * x[0], s * x[1], s * x[2]};
}

Vec qlog_coords(const Quat& q) {
  double vn = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  double angle = 2.0 * std::atan2(vn, q[0]);
  double s = vn > 1e-14 ? angle / vn : 2.0;
  return {s * q[1], s * q[2], s * q[3]};
}

}  // namespace

TEST_CASE("algebra specs") {
  auto su2 = su2_algebra();
  CHECK(su2.antisymmetry_defect() == 0.0);
  CHECK(su2.jacobi_defect() <= 1e-12);
  CHECK(su2.metric_invariance_defect() <= 1e-12);
  CHECK_FALSE(su2.abelian());
  Vec e1{1, 0, 0}, e2{0, 1, 0};
  Vec br = su2.bracket(e1, e2);
  CHECK(br[2] == doctest::Approx(1.0));
  auto t2 = abelian_algebra(2, "t2");
  CHECK(t2.abelian());
  CHECK(t2.jacobi_defect() == 0.0);
}

TEST_CASE("s2_x_torus: laws, moment, split, equivariant closure") {
  for (bool circle : {true, false}) {
    ScenarioParams p;
    p.with_circle = circle;
    Scenario s = build_scenario("s2_x_torus", p);
    CHECK(s.M.certificate.ok());
    CHECK(s.M.k == (circle ? 2 : 1));
    auto pts = s.M.chart->samples(60);
    auto laws = action_laws_report(s.M, s.action, pts);
    CHECK(laws.homomorphism_defect <= 1e-12);
    CHECK(laws.invariance_defect <= 1e-12);
    auto mc = moment_check(s.M, s.action, s.mu, pts);
    CHECK(mc.comoment_defect <= 1e-9);
    CHECK(mc.leibniz_defect <= 1e-9);
    CHECK(mc.sign_characterization_defect <= 1e-9);
    REQUIRE(mc.finite_equivariance_defect.has_value());
    CHECK(*mc.finite_equivariance_defect <= 1e-9);
    auto sv = verify_split(s.M, s.action, s.mu, *s.split, pts);
    CHECK(sv.reproduce_defect <= 1e-12);
    CHECK(sv.eta_closed_defect <= 1e-12);
    CHECK(sv.horizontal_defect <= 1e-12);
    if (circle) {
      auto eq = equivariant_closed_check(s.M, s.action, *s.sigma, *s.split, {1.0, 0.0}, pts);
      CHECK(eq.max_defect() <= 1e-9);
      auto eq2 = equivariant_closed_check(s.M, s.action, *s.sigma, *s.split, {0.4, 1.3}, pts);
      CHECK(eq2.max_defect() <= 1e-9);
      // zeta = 0 reduces to d eta = 0 and iota eta = 0
      auto eq0 = equivariant_closed_check(s.M, s.action, *s.sigma, *s.split, {0.0, 0.0}, pts);
      CHECK(eq0.exponential_defect <= 1e-12);
    }
  }
}

TEST_CASE("non-basic splitting is rejected by the equivariant check") {
  Scenario s = build_scenario("power_sigma_ell");
  CHECK_THROWS_AS(equivariant_closed_check(s.M, s.action, *s.sigma, *s.split, {1.0, 0.0},
                                           s.M.chart->samples(5)),
                  std::invalid_argument);
}

TEST_CASE("s2_x_torus: fixed components with signed weights") {
  Scenario s = build_scenario("s2_x_torus");
  REQUIRE(s.component_charts.size() == 2);
  for (const auto& fc : s.component_charts) {
    auto comps = fixed_point_locator(fc.M, fc.action, fc.sigma, fc.nu);
    REQUIRE(comps.size() == 1);
    const auto& c = comps.front();
    CHECK(c.weights_integer);
    REQUIRE(c.weights.size() == 1);
    CHECK(c.weights[0] == doctest::Approx(fc.expected_weights[0]).epsilon(1e-6));
    CHECK(c.nu_value[0] == doctest::Approx(fc.expected_nu).epsilon(1e-9));
    CHECK(c.nu_spread <= 1e-9);
  }
  // the free locus contains no fixed components away from the poles
  Scenario plain = build_scenario("s2_x_torus");
  FixedPointOptions opts;
  opts.grid_per_dim = 13;
  auto none = fixed_point_locator(plain.M, plain.action, *plain.sigma, plain.split->nu, opts);
  int interior = 0;
  for (const auto& c : none)
    for (const auto& ptv : c.points)
      if (std::abs(std::abs(ptv[1]) - 1.0) > 1e-9) ++interior;
  CHECK(interior == 0);
}

TEST_CASE("power_sigma_ell: powers stay hamiltonian") {
  for (int ell : {1, 2}) {
    for (int rank : {1, 2}) {
      ScenarioParams p;
      p.ell = ell;
      p.torus_rank = rank;
      Scenario s = build_scenario("power_sigma_ell", p);
      CHECK(s.M.k == 2 * ell - 1);
      CHECK(s.M.certificate.ok());
      auto pts = s.M.chart->samples(60);
      auto laws = action_laws_report(s.M, s.action, pts);
      CHECK(laws.homomorphism_defect <= 1e-12);
      CHECK(laws.invariance_defect <= 1e-12);
      auto mc = moment_check(s.M, s.action, s.mu, pts);
      CHECK(mc.comoment_defect <= 1e-8);
      CHECK(mc.leibniz_defect <= 1e-8);
      CHECK(mc.sign_characterization_defect <= 1e-8);
      REQUIRE(mc.finite_equivariance_defect.has_value());
      CHECK(*mc.finite_equivariance_defect <= 1e-8);
      auto sv = verify_split(s.M, s.action, s.mu, *s.split, pts);
      CHECK(sv.reproduce_defect <= 1e-12);
      CHECK(sv.invariance_defect <= 1e-10);
    }
  }
}

TEST_CASE("multimomentum_trivial: canonical structure and contraction moment") {
  for (auto [m, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 2}}) {
    ScenarioParams p;
    p.m = m;
    p.k = k;
    Scenario s = build_scenario("multimomentum_trivial", p);
    CHECK(s.M.k == k);
    CHECK(s.M.certificate.ok());
    auto pts = s.M.chart->samples(50);
    auto laws = action_laws_report(s.M, s.action, pts);
    CHECK(laws.homomorphism_defect <= 1e-11);
    CHECK(laws.invariance_defect <= 1e-11);
    auto mc = moment_check(s.M, s.action, s.mu, pts);
    CHECK(mc.comoment_defect <= 1e-9);
    CHECK(mc.leibniz_defect <= 1e-9);
    CHECK(mc.sign_characterization_defect <= 1e-9);
  }
}

TEST_CASE("hopf_c2: laws and level sets") {
  Scenario s = build_scenario("hopf_c2");
  CHECK(s.M.certificate.ok());
  auto pts = s.M.chart->samples(60);
  auto laws = action_laws_report(s.M, s.action, pts);
  CHECK(laws.homomorphism_defect <= 1e-12);
  CHECK(laws.invariance_defect <= 1e-11);
  auto mc = moment_check(s.M, s.action, s.mu, pts);
  CHECK(mc.comoment_defect <= 1e-9);
  CHECK(mc.leibniz_defect <= 1e-9);
  CHECK(mc.sign_characterization_defect <= 1e-9);
  REQUIRE(mc.finite_equivariance_defect.has_value());
  CHECK(*mc.finite_equivariance_defect <= 1e-9);

  // split level set at lambda = 1 via the embedded samples
  std::vector<Vec> level;
  for (const Vec& x : s.presentation->level_chart->samples(50))
    level.push_back(s.presentation->embed.eval(x));
  auto rep = split_level_set(s.M, s.action, *s.split, {1.0}, level, 1e-7);
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.locally_free);
  CHECK(rep.surjective);
  CHECK(rep.min_jacobian_rank == 1);
  CHECK(rep.min_eta_norm > 0.9);
  CHECK(rep.membership_disagreement <= 1e-7);

  // lambda outside the image: vacuous
  auto rep2 = split_level_set(s.M, s.action, *s.split, {-1.0}, {}, 1e-7);
  CHECK(rep2.vacuous);

  // interior level on s2_x_torus has rank-1 jacobian everywhere
  Scenario s2 = build_scenario("s2_x_torus");
  auto rep3 = split_level_set(s2.M, s2.action, *s2.split, {0.3}, {}, 1e-6, 5e-2);
  CHECK_FALSE(rep3.vacuous);
  CHECK(rep3.min_jacobian_rank == 1);
}

TEST_CASE("su2 maurer-cartan forms match the quaternion oracle") {
  Scenario s = build_scenario("su2_cartan");
  ScenarioParams pr;
  pr.su2_action = "right";
  Scenario sr = build_scenario("su2_cartan", pr);
  // mu_right = -theta, mu_left = -theta_bar
  auto pts = s.M.chart->samples(12);
  const double h = 1e-6;
  for (const Vec& x : pts) {
    Quat q0 = qexp_coords(x);
    for (int j = 0; j < 3; ++j) {
      Vec xp = x, xm = x;
      xp[static_cast<std::size_t>(j)] += h;
      xm[static_cast<std::size_t>(j)] -= h;
      Quat qp = qexp_coords(xp), qm = qexp_coords(xm);
      Quat dq{(qp[0] - qm[0]) / (2 * h), (qp[1] - qm[1]) / (2 * h), (qp[2] - qm[2]) / (2 * h),
              (qp[3] - qm[3]) / (2 * h)};
      Quat left = qmul(qconj(q0), dq);   // theta(d_j) as a quaternion
      Quat right = qmul(dq, qconj(q0));  // theta_bar(d_j)
      for (int i = 0; i < 3; ++i) {
        double theta_ij =
            -eval_form(sr.mu.components[static_cast<std::size_t>(i)], x).at(Mask{1} << j);
        double thetabar_ij =
            -eval_form(s.mu.components[static_cast<std::size_t>(i)], x).at(Mask{1} << j);
        CHECK(std::abs(theta_ij - 2 * left[static_cast<std::size_t>(i) + 1]) <= 1e-7);
        CHECK(std::abs(thetabar_ij - 2 * right[static_cast<std::size_t>(i) + 1]) <= 1e-7);
      }
    }
  }
}

TEST_CASE("su2 fundamental fields match the group-flow oracle") {
  const double h = 1e-6;
  for (const std::string& which : {"left", "right", "adjoint"}) {
    ScenarioParams p;
    p.su2_action = which;
    Scenario s = build_scenario("su2_cartan", p);
    auto pts = s.M.chart->samples(10);
    for (const Vec& x : pts) {
      Quat q0 = qexp_coords(x);
      for (int b = 0; b < 3; ++b) {
        Vec xi(3, 0.0);
        xi[static_cast<std::size_t>(b)] = 1.0;
        auto at = [&](double t) {
          Vec txi{-t * xi[0], -t * xi[1], -t * xi[2]};
          Quat g = qexp_coords(txi);  // e^{-t xi}
          Quat moved;
          if (which == "left")
            moved = qmul(g, q0);
          else if (which == "right")
            moved = qmul(q0, qconj(g));  // x . e^{t xi}
          else
            moved = qmul(qmul(g, q0), qconj(g));
          return qlog_coords(moved);
        };
        Vec fplus = at(h), fminus = at(-h);
        MultiVector v = eval_field(s.action.fundamental_fields[static_cast<std::size_t>(b)], x);
        for (int i = 0; i < 3; ++i) {
          double fd =
              (fplus[static_cast<std::size_t>(i)] - fminus[static_cast<std::size_t>(i)]) / (2 * h);
          CHECK(std::abs(v.at(Mask{1} << i) - fd) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("su2: frame normalization and bi-invariance of omega") {
  Scenario s = build_scenario("su2_cartan");
  ScenarioParams pr;
  pr.su2_action = "right";
  Scenario sr = build_scenario("su2_cartan", pr);
  auto pts = s.M.chart->samples(15);
  for (const Vec& x : pts) {
    Eigen::Matrix3d Theta;
    for (int i = 0; i < 3; ++i) {
      AlternatingForm ti = eval_form(sr.mu.components[static_cast<std::size_t>(i)], x);
      for (int j = 0; j < 3; ++j) Theta(i, j) = -ti.at(Mask{1} << j);
    }
    Eigen::Matrix3d E = Theta.inverse();
    std::vector<Vec> frame(3, Vec(3));
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i)
        frame[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = E(i, a);
    double val = eval_on_vectors(eval_form(s.M.omega, x), std::span<const Vec>(frame));
    CHECK(val == doctest::Approx(1.0).epsilon(1e-9));
  }
  // The invariant 3-forms built from the two Maurer-Cartan forms are
  // negatives of each other, and reproduce omega after the frame
  // normalization.
  FormField left_version = make_form(s.M.chart, 3);
  FormField right_version = make_form(s.M.chart, 3);
  for (int i = 0; i < 3; ++i) {
    FormField theta_i = Expr(-1.0) * sr.mu.components[static_cast<std::size_t>(i)];
    FormField thetabar_i = Expr(-1.0) * s.mu.components[static_cast<std::size_t>(i)];
    left_version = left_version + wedge(exterior_derivative(theta_i), theta_i);
    right_version = right_version + wedge(exterior_derivative(thetabar_i), thetabar_i);
  }
  CHECK(sampled_max(left_version + right_version, pts) <= 1e-9);
  CHECK(sampled_max(Expr(-1.0 / 3.0) * left_version - s.M.omega, pts) <= 1e-9);
}

TEST_CASE("su2 moment maps pass the law suite for all three actions") {
  for (const std::string& which : {"left", "right", "adjoint"}) {
    ScenarioParams p;
    p.su2_action = which;
    Scenario s = build_scenario("su2_cartan", p);
    CHECK(s.M.certificate.ok());
    auto pts = s.M.chart->samples(50);
    auto laws = action_laws_report(s.M, s.action, pts);
    CAPTURE(which);
    CHECK(laws.homomorphism_defect <= 1e-8);
    CHECK(laws.invariance_defect <= 1e-8);
    auto mc = moment_check(s.M, s.action, s.mu, pts);
    CHECK(mc.comoment_defect <= 1e-6);
    CHECK(mc.leibniz_defect <= 1e-6);
    CHECK(mc.sign_characterization_defect <= 1e-6);
    if (which == "adjoint") {
      REQUIRE(mc.finite_equivariance_defect.has_value());
      CHECK(*mc.finite_equivariance_defect <= 1e-6);
    }
  }
}

TEST_CASE("su2 weyl level set characterizes the normalizer") {
  Scenario s = build_scenario("su2_cartan");
  REQUIRE(s.weyl_form.has_value());
  for (double t : {0.15, 0.4, 0.8, 1.2}) {
    AlternatingForm w = eval_form(*s.weyl_form, {0.0, 0.0, t});
    CHECK(frobenius(w) <= 1e-10);
  }
  auto pts = s.M.chart->samples(200);
  for (const Vec& x : pts) {
    double dist = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    double defect = frobenius(eval_form(*s.weyl_form, x));
    if (dist > 0.05) CHECK(defect > 1e-3 * dist);
    if (dist < 1e-8) CHECK(defect <= 1e-7);
  }
}

TEST_CASE("product spheres: moment and split for both modes") {
  for (const std::string& mode : {"single", "diagonal"}) {
    ScenarioParams p;
    p.mode = mode;
    Scenario s = build_scenario("product_spheres_torus", p);
    CHECK(s.M.certificate.ok());
    auto pts = s.M.chart->samples(50);
    auto laws = action_laws_report(s.M, s.action, pts);
    CHECK(laws.homomorphism_defect <= 1e-12);
    CHECK(laws.invariance_defect <= 1e-12);
    auto mc = moment_check(s.M, s.action, s.mu, pts);
    CHECK(mc.comoment_defect <= 1e-10);
    CHECK(mc.leibniz_defect <= 1e-10);
    CHECK(mc.sign_characterization_defect <= 1e-9);
    auto sv = verify_split(s.M, s.action, s.mu, *s.split, pts);
    CHECK(sv.reproduce_defect <= 1e-12);
    CHECK(sv.horizontal_defect <= 1e-12);
  }
}

TEST_CASE("scenario catalog is sorted and annotated") {
  auto cat = scenario_catalog();
  REQUIRE(cat.size() == 6);
  for (std::size_t i = 1; i < cat.size(); ++i) CHECK(cat[i - 1].first < cat[i].first);
  for (const auto& [name, desc] : cat) CHECK(!desc.empty());
}

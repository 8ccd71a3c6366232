#include "plectic/scenarios.hpp"

#include <cmath>

namespace plectic {

namespace {

Expr X(int i) { return Expr::var(i); }

const double kPi = M_PI;

// ---------------------------------------------------------------------------
// s2_x_torus: S^2 x S^1 in cylindrical coordinates, circle rotation, nu = z.
// with_circle = false drops the S^1 factor and gives the plain sphere (the
// symplectic case eta = 1).

GroupElementMap rotation_map(const ChartPtr& chart, int axis, double angle, int algebra_dim) {
  GroupElementMap g;
  g.label = "rot(" + std::to_string(angle) + ")";
  ChartMap m;
  m.source = chart;
  m.target = chart;
  for (int i = 0; i < chart->dim(); ++i)
    m.components.push_back(i == axis ? X(i) - Expr(angle) : X(i));
  g.map = std::move(m);
  g.Ad = Eigen::MatrixXd::Identity(algebra_dim, algebra_dim);
  return g;
}

FixedComponentChart sphere_cap(bool north, bool with_circle, const std::string& label) {
  std::vector<Coord> coords{{"x", -0.6, 0.6, false}, {"y", -0.6, 0.6, false}};
  if (with_circle) coords.push_back({"phi", 0, 2 * kPi, true});
  auto cap = make_chart(label, coords);
  Expr z = sqrt(Expr(1.0) - pow(X(0), 2) - pow(X(1), 2));
  if (!north) z = -z;
  FixedComponentChart fc;
  fc.label = label;
  FormField sigma = make_form(cap, 2);
  coeff(sigma, {0, 1}) = Expr(1.0) / z;  // dtheta ^ dz in cap coordinates
  fc.sigma = sigma;
  VecField rot = make_vecfield(cap, 1);
  coeff(rot, {0}) = -X(1);
  coeff(rot, {1}) = X(0);
  GroupActionSpec A;
  A.algebra = abelian_algebra(1, "u1");
  A.fundamental_fields = {rot};
  fc.action = A;
  fc.nu = {z};
  FormField omega = sigma;
  if (with_circle) {
    FormField dphi = make_form(cap, 1);
    coeff(dphi, {2}) = Expr(1.0);
    omega = wedge(sigma, dphi);
  }
  fc.M = make_plectic(cap, omega, 1e-6, 20, 0.2);
  fc.expected_weights = {north ? 1.0 : -1.0};
  fc.expected_nu = north ? 1.0 : -1.0;
  return fc;
}

Scenario build_s2_torus(const ScenarioParams& p) {
  Scenario s;
  s.name = "s2_x_torus";
  s.params = p;
  s.description = p.with_circle
                      ? "volume form on S2 x S1 with circle rotation; split moment z dphi; "
                        "reduction at interior levels, stationary phase, leaf restriction"
                      : "area form on S2 with circle rotation; the stationary-phase benchmark "
                        "with unit auxiliary form";
  std::vector<Coord> coords{{"theta", 0, 2 * kPi, true}, {"z", -1, 1, false}};
  if (p.with_circle) coords.push_back({"phi", 0, 2 * kPi, true});
  auto chart = make_chart(p.with_circle ? "s2xs1" : "s2", coords);

  FormField sigma = make_form(chart, 2);
  coeff(sigma, {0, 1}) = Expr(1.0);
  FormField eta = p.with_circle ? make_form(chart, 1) : scalar_field(chart, Expr(1.0));
  if (p.with_circle) coeff(eta, {2}) = Expr(1.0);
  FormField omega = wedge(sigma, eta);
  s.M = make_plectic(chart, omega);
  s.sigma = sigma;

  VecField rot = make_vecfield(chart, 1);
  coeff(rot, {0}) = Expr(1.0);  // d/dtheta
  GroupActionSpec A;
  A.algebra = abelian_algebra(1, "u1");
  A.fundamental_fields = {rot};
  A.group_maps = {rotation_map(chart, 0, 0.7, 1), rotation_map(chart, 0, 2.0, 1),
                  rotation_map(chart, 0, kPi / 2, 1)};
  s.action = A;

  s.mu.components = {X(1) * eta};
  SplitMoment split;
  split.nu = {X(1)};
  split.eta = eta;
  split.flavor = SplitFlavor::basic;
  s.split = split;

  s.component_charts = {sphere_cap(true, p.with_circle, "north_cap"),
                        sphere_cap(false, p.with_circle, "south_cap")};

  LocalizationScenario L;
  L.base_name = s.name;
  L.M = s.M;
  L.action = A;
  L.split = split;
  L.sigma = sigma;
  L.group_volume = 2 * kPi;
  L.delta = 1.0;
  for (const auto& fc : s.component_charts) {
    FixedComponentData d;
    d.label = fc.label;
    d.nu_value = fc.expected_nu;
    d.weights = fc.expected_weights;
    d.measure_integral = p.with_circle ? 2 * kPi : 1.0;  // integral of e^sigma eta over F
    L.components.push_back(d);
  }
  L.grid = QuadratureGrid::for_chart(*chart, 64, 32);
  s.localization = L;

  if (p.with_circle) {
    // Reduction at an interior level: N = T^2, base = S^1, reduced form of
    // degree 3 on a 1-dimensional base vanishes identically.
    double lam = p.lambda;
    auto N = make_chart("s2xs1_level", {{"gamma", 0, 2 * kPi, true}, {"phi", 0, 2 * kPi, true}});
    auto B = make_chart("s2xs1_base", {{"phi", 0, 2 * kPi, true}});
    ReductionPresentation P;
    P.ambient = s.M;
    P.action = A;
    P.moment = s.mu;
    FormField phi_level = Expr(lam) * eta;
    P.phi = {phi_level};
    P.level_chart = N;
    P.embed = ChartMap{N, chart, {X(0), Expr(lam), X(1)}};
    VecField lf = make_vecfield(N, 1);
    coeff(lf, {0}) = Expr(1.0);
    P.level_fields = {lf};
    P.base_chart = B;
    P.quotient = ChartMap{N, B, {X(1)}};
    P.section = ChartMap{B, N, {Expr(0.5), X(0)}};
    P.section2 = ChartMap{B, N, {Expr(2.5), X(0)}};
    s.presentation = P;
  }
  return s;
}

// ---------------------------------------------------------------------------
// product_spheres_torus: S^2 x S^2 x S^1 with sigma the sum of the sphere
// area forms and eta = dphi on a unit-period circle. Circle action rotates
// the first sphere (single) or both (diagonal).

Scenario build_product_spheres(const ScenarioParams& p) {
  Scenario s;
  s.name = "product_spheres_torus";
  s.params = p;
  s.description = p.mode == "single"
                      ? "S2 x S2 x S1 with the first sphere rotated; trivial level-0 bundle, "
                        "heat-kernel localization benchmark"
                      : "S2 x S2 x S1 with the diagonal rotation; nontrivial level bundle, "
                        "variation-slope family";
  auto chart = make_chart("s2s2s1", {{"theta1", 0, 2 * kPi, true},
                                     {"z1", -1, 1, false},
                                     {"theta2", 0, 2 * kPi, true},
                                     {"z2", -1, 1, false},
                                     {"phi", 0, 1, true}});
  FormField sigma = make_form(chart, 2);
  coeff(sigma, {0, 1}) = Expr(1.0);
  coeff(sigma, {2, 3}) = Expr(1.0);
  FormField eta = make_form(chart, 1);
  coeff(eta, {4}) = Expr(1.0);
  s.M = make_plectic(chart, wedge(sigma, eta));
  s.sigma = sigma;

  const bool diag = p.mode == "diagonal";
  VecField rot = make_vecfield(chart, 1);
  coeff(rot, {0}) = Expr(1.0);
  if (diag) coeff(rot, {2}) = Expr(1.0);
  GroupActionSpec A;
  A.algebra = abelian_algebra(1, "u1");
  A.fundamental_fields = {rot};
  {
    GroupElementMap g;
    g.label = "rot(0.9)";
    ChartMap m;
    m.source = chart;
    m.target = chart;
    m.components = {X(0) - Expr(0.9), X(1), diag ? X(2) - Expr(0.9) : X(2), X(3), X(4)};
    g.map = std::move(m);
    g.Ad = Eigen::MatrixXd::Identity(1, 1);
    A.group_maps = {g};
  }
  s.action = A;

  Expr nu = diag ? X(1) + X(3) : X(1);
  s.mu.components = {nu * eta};
  SplitMoment split;
  split.nu = {nu};
  split.eta = eta;
  split.flavor = SplitFlavor::basic;
  s.split = split;

  if (!diag) {
    // Level 0 of nu = z1: N = S^1 x S^2 x S^1, a trivial circle bundle.
    auto N = make_chart("psph_level", {{"gamma", 0, 2 * kPi, true},
                                       {"theta2", 0, 2 * kPi, true},
                                       {"z2", -1, 1, false},
                                       {"phi", 0, 1, true}});
    auto B = make_chart("psph_base",
                        {{"theta2", 0, 2 * kPi, true}, {"z2", -1, 1, false}, {"phi", 0, 1, true}});
    ReductionPresentation P;
    P.ambient = s.M;
    P.action = A;
    P.moment = s.mu;
    P.phi = {make_form(chart, 1)};  // level 0
    P.level_chart = N;
    P.embed = ChartMap{N, chart, {X(0), Expr(0.0), X(1), X(2), X(3)}};
    VecField lf = make_vecfield(N, 1);
    coeff(lf, {0}) = Expr(1.0);
    P.level_fields = {lf};
    P.base_chart = B;
    P.quotient = ChartMap{N, B, {X(1), X(2), X(3)}};
    P.section = ChartMap{B, N, {Expr(0.3), X(0), X(1), X(2)}};
    P.section2 = ChartMap{B, N, {Expr(2.1), X(0), X(1), X(2)}};
    s.presentation = P;

    VecField tstar = make_vecfield(chart, 1);
    coeff(tstar, {1}) = Expr(1.0);  // d/dz1
    s.tstar_fields = {tstar};
    CycleSpec c2;
    c2.axes = {0, 1};  // (theta2, z2) on the base
    c2.fixed = {0.0, 0.0, 0.25};
    s.chern_cycles = {c2};

    ReducedSpaceData rd;
    rd.base = B;
    FormField sigma0 = make_form(B, 2);
    coeff(sigma0, {0, 1}) = Expr(1.0);
    rd.sigma0 = sigma0;
    FormField eta0 = make_form(B, 1);
    coeff(eta0, {2}) = Expr(1.0);
    rd.eta0 = eta0;
    rd.grid = QuadratureGrid::for_chart(*B, 48, 24);
    s.reduced_data = rd;

    LocalizationScenario L;
    L.base_name = s.name;
    L.M = s.M;
    L.action = A;
    L.split = split;
    L.sigma = sigma;
    L.group_volume = 2 * kPi;
    L.delta = 1.0;
    FixedComponentData north{"north_x_s2xs1", 1.0, {1.0}, 4.0 * kPi};
    FixedComponentData south{"south_x_s2xs1", -1.0, {-1.0}, 4.0 * kPi};
    L.components = {north, south};
    L.grid = QuadratureGrid::for_chart(*chart, 48, 16);
    s.localization = L;
  } else {
    // Diagonal family at levels in (0, 2): base chart (v, psi, phi) shared
    // across lambda; embedding z1 = (lambda + (2-lambda) v)/2, theta1 = gamma,
    // theta2 = gamma - psi.
    auto N = make_chart("psph_diag_level", {{"v", -1, 1, false},
                                            {"psi", 0, 2 * kPi, true},
                                            {"gamma", 0, 2 * kPi, true},
                                            {"phi", 0, 1, true}});
    auto B = make_chart("psph_diag_base",
                        {{"v", -1, 1, false}, {"psi", 0, 2 * kPi, true}, {"phi", 0, 1, true}});

    auto presentation_at = [chart, N, B, A, mu = s.mu, M = s.M, eta](double lam) {
      ReductionPresentation P;
      P.ambient = M;
      P.action = A;
      P.moment = mu;
      P.phi = {Expr(lam) * eta};
      P.level_chart = N;
      Expr half(0.5);
      Expr z1 = half * (Expr(lam) + (Expr(2.0) - Expr(lam)) * X(0));
      Expr z2 = half * (Expr(lam) - (Expr(2.0) - Expr(lam)) * X(0));
      P.embed = ChartMap{N, chart, {X(2), z1, X(2) - X(1), z2, X(3)}};
      VecField lf = make_vecfield(N, 1);
      coeff(lf, {2}) = Expr(1.0);  // d/dgamma
      P.level_fields = {lf};
      P.base_chart = B;
      P.quotient = ChartMap{N, B, {X(0), X(1), X(3)}};
      P.section = ChartMap{B, N, {X(0), X(1), Expr(0.4), X(2)}};
      P.section2 = ChartMap{B, N, {X(0), X(1), Expr(2.5), X(2)}};
      return P;
    };
    s.presentation = presentation_at(p.lambda);

    // Conjugate distribution weighted to vanish at the sphere poles, so the
    // associated connection extends across the whole level set.
    Expr a_num = Expr(1.0) - pow(X(1), 2);
    Expr b_num = Expr(1.0) - pow(X(3), 2);
    Expr den = a_num + b_num;
    VecField tstar = make_vecfield(chart, 1);
    coeff(tstar, {1}) = a_num / den;
    coeff(tstar, {3}) = b_num / den;
    s.tstar_fields = {tstar};

    CycleSpec top;
    top.axes = {0, 1, 2};
    top.fixed = {0.0, 0.0, 0.0};
    CycleSpec c2;
    c2.axes = {0, 1};
    c2.fixed = {0.0, 0.0, 0.25};
    CycleSpec ce;
    ce.axes = {2};
    ce.fixed = {0.1, 0.9, 0.0};
    s.chern_cycles = {c2};

    PresentationFamily fam;
    fam.at = presentation_at;
    VecField psi_t = make_vecfield(chart, 1);
    Expr vden = Expr(2.0) - X(1) - X(3);
    Expr v = (X(1) - X(3)) / vden;
    coeff(psi_t, {1}) = Expr(0.5) * (Expr(1.0) - v);
    coeff(psi_t, {3}) = Expr(0.5) * (Expr(1.0) + v);
    fam.transverse = psi_t;
    fam.eta = eta;
    fam.tstar_fields = s.tstar_fields;
    fam.sigma = sigma;
    fam.top_cycle = top;
    fam.chern_cycle = c2;
    fam.eta_cycle = ce;
    for (int i = 0; i <= 8; ++i) fam.lambda_grid.push_back(0.6 + 0.1 * i);
    s.family = fam;
  }
  return s;
}

// ---------------------------------------------------------------------------
// hopf_c2: C^2 x S^1 with the diagonal phase rotation, nu = |z|^2/2, eta =
// dphi. Level sets are round S^3 x S^1; the base carries the Hopf data.

Scenario build_hopf(const ScenarioParams& p) {
  Scenario s;
  s.name = "hopf_c2";
  s.params = p;
  s.description =
      "C^2 x S^1 with the phase rotation; level sets S^3 x S^1; reduced form, Hopf "
      "connection, Chern pairing and the variation family";
  auto chart = make_chart("c2xs1", {{"a0", -2, 2, false},
                                    {"b0", -2, 2, false},
                                    {"a1", -2, 2, false},
                                    {"b1", -2, 2, false},
                                    {"phi", 0, 2 * kPi, true}});
  FormField sigma = make_form(chart, 2);
  coeff(sigma, {0, 1}) = Expr(1.0);
  coeff(sigma, {2, 3}) = Expr(1.0);
  FormField eta = make_form(chart, 1);
  coeff(eta, {4}) = Expr(1.0);
  s.M = make_plectic(chart, wedge(sigma, eta));
  s.sigma = sigma;

  VecField rot = make_vecfield(chart, 1);
  coeff(rot, {0}) = X(1);
  coeff(rot, {1}) = -X(0);
  coeff(rot, {2}) = X(3);
  coeff(rot, {3}) = -X(2);
  GroupActionSpec A;
  A.algebra = abelian_algebra(1, "u1");
  A.fundamental_fields = {rot};
  // the cyclic subgroup at quarter turns plus a generic angle; these drive
  // both the equivariance spot checks and the discrete averaging
  for (double ang : {1.1, kPi / 2, kPi, 3 * kPi / 2}) {
    GroupElementMap g;
    g.label = "rot(" + std::to_string(ang) + ")";
    double c = std::cos(ang), sn = std::sin(ang);
    ChartMap m;
    m.source = chart;
    m.target = chart;
    m.components = {Expr(c) * X(0) - Expr(sn) * X(1), Expr(sn) * X(0) + Expr(c) * X(1),
                    Expr(c) * X(2) - Expr(sn) * X(3), Expr(sn) * X(2) + Expr(c) * X(3), X(4)};
    g.map = std::move(m);
    g.Ad = Eigen::MatrixXd::Identity(1, 1);
    A.group_maps.push_back(std::move(g));
  }
  s.action = A;

  Expr nu = Expr(0.5) * (pow(X(0), 2) + pow(X(1), 2) + pow(X(2), 2) + pow(X(3), 2));
  s.mu.components = {nu * eta};
  SplitMoment split;
  split.nu = {nu};
  split.eta = eta;
  split.flavor = SplitFlavor::basic;
  s.split = split;

  auto N = make_chart("hopf_level", {{"u", 0, kPi / 2, false},
                                     {"psi", 0, 2 * kPi, true},
                                     {"gamma", 0, 2 * kPi, true},
                                     {"phi", 0, 2 * kPi, true}});
  auto B = make_chart("hopf_base",
                      {{"u", 0, kPi / 2, false}, {"psi", 0, 2 * kPi, true}, {"phi", 0, 2 * kPi, true}});

  bool corrupt = p.corrupt_phi;
  auto presentation_at = [chart, N, B, A, mu = s.mu, M = s.M, eta, corrupt](double lam) {
    ReductionPresentation P;
    P.ambient = M;
    P.action = A;
    P.moment = mu;
    FormField phi_level = Expr(lam) * eta;
    if (corrupt) {
      FormField bad = make_form(chart, 1);
      coeff(bad, {1}) = Expr(0.1) * X(0);  // d of this is nonzero
      phi_level = phi_level + bad;
    }
    P.phi = {phi_level};
    P.level_chart = N;
    double rho = std::sqrt(2.0 * lam);
    Expr cu = cos(X(0)), su = sin(X(0));
    P.embed = ChartMap{N, chart,
                       {Expr(rho) * cu * cos(X(2)), Expr(rho) * cu * sin(X(2)),
                        Expr(rho) * su * cos(X(2) + X(1)), Expr(rho) * su * sin(X(2) + X(1)), X(3)}};
    VecField lf = make_vecfield(N, 1);
    coeff(lf, {2}) = Expr(-1.0);  // the phase action moves gamma backwards
    P.level_fields = {lf};
    P.base_chart = B;
    P.quotient = ChartMap{N, B, {X(0), X(1), X(3)}};
    P.section = ChartMap{B, N, {X(0), X(1), Expr(0.7), X(2)}};
    P.section2 = ChartMap{B, N, {X(0), X(1), Expr(2.9), X(2)}};
    return P;
  };
  s.presentation = presentation_at(p.lambda);

  VecField tstar = make_vecfield(chart, 1);
  Expr twonu = Expr(2.0) * nu;
  coeff(tstar, {0}) = X(0) / twonu;
  coeff(tstar, {1}) = X(1) / twonu;
  coeff(tstar, {2}) = X(2) / twonu;
  coeff(tstar, {3}) = X(3) / twonu;
  s.tstar_fields = {tstar};

  CycleSpec top;
  top.axes = {0, 1, 2};
  top.fixed = {0.0, 0.0, 0.0};
  CycleSpec c2;
  c2.axes = {0, 1};
  c2.fixed = {0.0, 0.0, 1.3};
  CycleSpec ce;
  ce.axes = {2};
  ce.fixed = {0.8, 2.0, 0.0};
  s.chern_cycles = {c2};

  PresentationFamily fam;
  fam.at = presentation_at;
  fam.transverse = tstar;  // the radial trivialization field
  fam.eta = eta;
  fam.tstar_fields = s.tstar_fields;
  fam.sigma = sigma;
  fam.top_cycle = top;
  fam.chern_cycle = c2;
  fam.eta_cycle = ce;
  for (int i = 0; i <= 10; ++i) fam.lambda_grid.push_back(0.5 + 0.1 * i);
  s.family = fam;
  return s;
}

// ---------------------------------------------------------------------------
// power_sigma_ell: (R^4, sigma^ell) with torus rotations of the coordinate
// planes and the moment ell nu sigma^{ell-1} from the symplectic pair.

Scenario build_power_sigma(const ScenarioParams& p) {
  Scenario s;
  s.name = "power_sigma_ell";
  s.params = p;
  s.description = "powers of the standard symplectic form on R^4 with plane rotations; "
                  "invariant split moment ell nu sigma^(ell-1)";
  auto chart = make_chart("r4", {{"x0", -1.5, 1.5, false},
                                 {"x1", -1.5, 1.5, false},
                                 {"x2", -1.5, 1.5, false},
                                 {"x3", -1.5, 1.5, false}});
  FormField sigma = make_form(chart, 2);
  coeff(sigma, {0, 1}) = Expr(1.0);
  coeff(sigma, {2, 3}) = Expr(1.0);
  s.sigma = sigma;

  FormField omega = sigma;
  for (int i = 1; i < p.ell; ++i) omega = wedge(omega, sigma);
  s.M = make_plectic(chart, omega);

  const int rank = p.torus_rank;
  GroupActionSpec A;
  A.algebra = abelian_algebra(rank, rank == 1 ? "u1" : "t2");
  VecField r1 = make_vecfield(chart, 1);
  coeff(r1, {0}) = X(1);
  coeff(r1, {1}) = -X(0);
  VecField r2 = make_vecfield(chart, 1);
  coeff(r2, {2}) = X(3);
  coeff(r2, {3}) = -X(2);
  Expr nu1 = Expr(0.5) * (pow(X(0), 2) + pow(X(1), 2));
  Expr nu2 = Expr(0.5) * (pow(X(2), 2) + pow(X(3), 2));
  std::vector<Expr> nus;
  if (rank == 2) {
    A.fundamental_fields = {r1, r2};
    nus = {nu1, nu2};
  } else {
    A.fundamental_fields = {r1 + r2};
    nus = {nu1 + nu2};
  }
  {
    double c = std::cos(0.8), sn = std::sin(0.8);
    GroupElementMap g;
    g.label = "rot01(0.8)";
    ChartMap m;
    m.source = chart;
    m.target = chart;
    m.components = {Expr(c) * X(0) - Expr(sn) * X(1), Expr(sn) * X(0) + Expr(c) * X(1), X(2), X(3)};
    if (rank == 1) {
      m.components[2] = Expr(c) * X(2) - Expr(sn) * X(3);
      m.components[3] = Expr(sn) * X(2) + Expr(c) * X(3);
    }
    g.map = std::move(m);
    g.Ad = Eigen::MatrixXd::Identity(rank, rank);
    A.group_maps = {g};
  }
  s.action = A;

  FormField eta = scalar_field(chart, Expr(static_cast<double>(p.ell)));
  for (int i = 1; i < p.ell; ++i) eta = wedge(eta, sigma);
  SplitMoment split;
  split.nu = nus;
  split.eta = eta;
  split.flavor = SplitFlavor::invariant;
  s.split = split;
  for (const Expr& nu : nus) s.mu.components.push_back(nu * eta);
  return s;
}

// ---------------------------------------------------------------------------
// su2_cartan: exponential coordinates on SU(2) away from the identity and the
// cut locus; the bi-invariant 3-form normalized by its frame values.

struct Su2Forms {
  std::vector<Expr> theta[3];      // left Maurer-Cartan components
  std::vector<Expr> theta_bar[3];  // right Maurer-Cartan components
};

// cross product helpers on expression triples
std::vector<Expr> cross(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Scenario build_su2(const ScenarioParams& p) {
  Scenario s;
  s.name = "su2_cartan";
  s.params = p;
  s.description = "bi-invariant 3-form on SU(2) in exponential coordinates; Maurer-Cartan "
                  "moment maps for the left, right and adjoint actions; Weyl level set";
  auto chart = make_chart("su2_exp", {{"x0", -1.2, 1.2, false},
                                      {"x1", -1.2, 1.2, false},
                                      {"x2", 0.1, 1.5, false}});
  Expr r2 = pow(X(0), 2) + pow(X(1), 2) + pow(X(2), 2);
  Expr r = sqrt(r2);
  Expr c1 = (Expr(1.0) - cos(r)) / r2;            // ad coefficient
  Expr c2 = (r - sin(r)) / (r2 * r);              // ad^2 coefficient
  Expr cg = (Expr(1.0) - (r / Expr(2.0)) * cos(r / Expr(2.0)) / sin(r / Expr(2.0))) / r2;

  std::vector<Expr> xv{X(0), X(1), X(2)};

  // 1-forms as coefficient triples: dx, x cross dx, x cross (x cross dx).
  // (x cross dx)_i = eps_ijk x_j dx_k; x cross (x cross dx) = x <x,dx> - r^2 dx.
  auto mc_form = [&](double ad_sign) {
    // returns components[i][k] = coefficient of dx_k in the i-th component
    std::vector<std::vector<Expr>> comp(3, std::vector<Expr>(3, Expr(0.0)));
    for (int i = 0; i < 3; ++i) comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr(1.0);
    // ad term: eps_ijk x_j dx_k
    auto add_ad = [&](const Expr& w) {
      comp[0][2] = comp[0][2] + w * X(1);
      comp[0][1] = comp[0][1] - w * X(2);
      comp[1][0] = comp[1][0] + w * X(2);
      comp[1][2] = comp[1][2] - w * X(0);
      comp[2][1] = comp[2][1] + w * X(0);
      comp[2][0] = comp[2][0] - w * X(1);
    };
    add_ad(Expr(ad_sign) * c1);
    // ad^2 term: x_i <x, dx> - r^2 dx_i
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k)
        comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] + c2 * xv[static_cast<std::size_t>(i)] * xv[static_cast<std::size_t>(k)];
      comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
          comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] - c2 * r2;
    }
    return comp;
  };
  auto theta_c = mc_form(-1.0);      // left Maurer-Cartan
  auto theta_bar_c = mc_form(1.0);   // right Maurer-Cartan

  auto to_form = [&](const std::vector<std::vector<Expr>>& comp, int i) {
    FormField f = make_form(chart, 1);
    for (int k = 0; k < 3; ++k) f.f.at(Mask{1} << k) = comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    return f;
  };
  FormField theta[3] = {to_form(theta_c, 0), to_form(theta_c, 1), to_form(theta_c, 2)};
  FormField theta_bar[3] = {to_form(theta_bar_c, 0), to_form(theta_bar_c, 1), to_form(theta_bar_c, 2)};

  // omega normalized by its value on the invariant frame:
  // omega(E1, E2, E3) = <[e1,e2],e3> = 1.
  FormField omega = wedge(wedge(theta[0], theta[1]), theta[2]);
  s.M = make_plectic(chart, omega, 1e-7);

  // Fundamental fields: left  -G(ad_x) xi, right -G(-ad_x) xi, adjoint x cross xi,
  // with G(ad) = I - ad/2 + cg ad^2.
  auto action_field = [&](int which, int basis) {
    std::vector<Expr> xi(3, Expr(0.0));
    xi[static_cast<std::size_t>(basis)] = Expr(1.0);
    std::vector<Expr> out(3, Expr(0.0));
    auto xxi = cross(xv, xi);
    auto xxxi = cross(xv, xxi);
    if (which == 0) {  // left h.x = hx: -xi + (x cross xi)/2 - cg x cross (x cross xi)
      for (int i = 0; i < 3; ++i)
        out[static_cast<std::size_t>(i)] = Expr(0.0) - xi[static_cast<std::size_t>(i)] + Expr(0.5) * xxi[static_cast<std::size_t>(i)] - cg * xxxi[static_cast<std::size_t>(i)];
    } else if (which == 1) {  // right h.x = x h^{-1}: +xi + (x cross xi)/2 + cg x cross (x cross xi)
      for (int i = 0; i < 3; ++i)
        out[static_cast<std::size_t>(i)] = xi[static_cast<std::size_t>(i)] + Expr(0.5) * xxi[static_cast<std::size_t>(i)] + cg * xxxi[static_cast<std::size_t>(i)];
    } else {  // adjoint h.x = h x h^{-1}
      out = xxi;
    }
    VecField f = make_vecfield(chart, 1);
    for (int i = 0; i < 3; ++i) f.v.at(Mask{1} << i) = out[static_cast<std::size_t>(i)];
    return f;
  };

  int which = p.su2_action == "left" ? 0 : p.su2_action == "right" ? 1 : 2;
  GroupActionSpec A;
  A.algebra = su2_algebra();
  for (int b = 0; b < 3; ++b) A.fundamental_fields.push_back(action_field(which, b));

  if (which == 2) {
    // Adjoint action: finite maps are the rotations Ad_exp(q), linear on the
    // chart; include elements near the identity and the Weyl element.
    auto rodrigues = [](const Vec& q) {
      double angle = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
      Eigen::Matrix3d K;
      K << 0, -q[2], q[1], q[2], 0, -q[0], -q[1], q[0], 0;
      Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
      if (angle > 1e-14)
        R += std::sin(angle) / angle * K + (1 - std::cos(angle)) / (angle * angle) * K * K;
      return R;
    };
    auto ad_map = [&](const Vec& q, const std::string& label) {
      GroupElementMap g;
      g.label = label;
      Eigen::Matrix3d R = rodrigues(q);
      ChartMap m;
      m.source = chart;
      m.target = chart;
      for (int i = 0; i < 3; ++i) {
        Expr e(0.0);
        for (int j = 0; j < 3; ++j) e = e + Expr(R(i, j)) * X(j);
        m.components.push_back(e);
      }
      g.map = std::move(m);
      g.Ad = R;
      return g;
    };
    A.group_maps = {ad_map({0.3, 0.0, 0.0}, "exp(0.3 e1)"),
                    ad_map({0.0, 0.2, 0.1}, "exp(0.2 e2 + 0.1 e3)"),
                    ad_map({kPi, 0.0, 0.0}, "weyl_j")};
  }
  s.action = A;

  // Moment normalizations are pinned by d mu_xi = iota_xi omega against the
  // frame-normalized omega; both Maurer-Cartan moments then carry a minus.
  for (int b = 0; b < 3; ++b) {
    FormField mu_b = make_form(chart, 1);
    if (which == 0)
      mu_b = Expr(-1.0) * theta_bar[b];
    else if (which == 1)
      mu_b = Expr(-1.0) * theta[b];
    else
      mu_b = Expr(-1.0) * (theta_bar[b] + theta[b]);
    s.mu.components.push_back(mu_b);
  }

  // Weyl comparison form: theta_bar - theta restricted to the torus axis e3.
  s.weyl_form = theta_bar[2] - theta[2];
  return s;
}

// ---------------------------------------------------------------------------
// multimomentum_trivial: coordinates (x^i, p_I) on the degree-k alternating
// bundle over R^m, theta = sum p_I dx^I, omega = -d theta, with the lifted
// rotation action and the contraction moment.

Scenario build_multimomentum(const ScenarioParams& p) {
  Scenario s;
  s.name = "multimomentum_trivial";
  s.params = p;
  s.description = "canonical k-plectic structure on the alternating-form bundle over R^m with "
                  "the lifted rotation action and the contraction moment";
  const int m = p.m;
  const int k = p.k;
  if (k < 1 || k > m) throw std::invalid_argument("multimomentum_trivial: need 1 <= k <= m");
  const auto masks = mask_basis(m, k);
  const int fibers = static_cast<int>(masks.size());
  std::vector<Coord> coords;
  for (int i = 0; i < m; ++i) coords.push_back({"x" + std::to_string(i), -1.5, 1.5, false});
  for (int i = 0; i < fibers; ++i) coords.push_back({"p" + std::to_string(i), -1.5, 1.5, false});
  auto chart = make_chart("multimomentum", coords);
  const int n = m + fibers;

  // theta = sum_I p_I dx^I on the total space.
  FormField theta = make_form(chart, k);
  for (int i = 0; i < fibers; ++i) theta.f.at(masks[static_cast<std::size_t>(i)]) = X(m + i);
  FormField omega = Expr(-1.0) * exterior_derivative(theta);
  s.M = make_plectic(chart, omega);

  // so(m) generators: rotation in each coordinate plane of the base.
  std::vector<std::pair<int, int>> planes;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) planes.push_back({i, j});
  const int l = static_cast<int>(planes.size());

  GroupActionSpec A;
  if (m == 2) {
    A.algebra = abelian_algebra(1, "so2");
  } else if (m == 3) {
    A.algebra = su2_algebra();  // so(3) has the same structure constants
    A.algebra.name = "so3";
    // order the basis so that generator q rotates the plane complementary to q
    planes = {{1, 2}, {2, 0}, {0, 1}};
  } else {
    throw std::invalid_argument("multimomentum_trivial: m must be 2 or 3");
  }

  for (int q = 0; q < l; ++q) {
    auto [i, j] = planes[static_cast<std::size_t>(q)];
    // base rotation with e^{-t xi}: xdot = x_j d_i - x_i d_j
    VecField base = make_vecfield(chart, 1);
    base.v.at(Mask{1} << i) = X(j);
    base.v.at(Mask{1} << j) = Expr(0.0) - X(i);
    // Fiber part: the unique linear extension preserving theta. Writing
    // L_base(dx^J) = sum_I c_{J,I} dx^I (constants for a linear base field),
    // the p-coefficients are V_I = -sum_J p_J c_{J,I}.
    VecField full = base;
    std::vector<std::vector<double>> cJI(static_cast<std::size_t>(fibers),
                                         std::vector<double>(static_cast<std::size_t>(fibers), 0.0));
    for (int J = 0; J < fibers; ++J) {
      FormField dxJ = make_form(chart, k);
      dxJ.f.at(masks[static_cast<std::size_t>(J)]) = Expr(1.0);
      FormField trans = lie_derivative(base, dxJ);
      for (int I = 0; I < fibers; ++I)
        cJI[static_cast<std::size_t>(J)][static_cast<std::size_t>(I)] =
            trans.f.at(masks[static_cast<std::size_t>(I)]).constant_value();
    }
    for (int I = 0; I < fibers; ++I) {
      Expr v(0.0);
      for (int J = 0; J < fibers; ++J) {
        double c = cJI[static_cast<std::size_t>(J)][static_cast<std::size_t>(I)];
        if (c != 0.0) v = v - Expr(c) * X(m + J);
      }
      full.v.at(Mask{1} << (m + I)) = v;
    }
    A.fundamental_fields.push_back(full);
  }
  (void)n;
  s.action = A;

  for (int q = 0; q < l; ++q)
    s.mu.components.push_back(interior_product(A.fundamental_fields[static_cast<std::size_t>(q)], theta));
  return s;
}

}  // namespace

Scenario build_scenario(const std::string& name, const ScenarioParams& params) {
  if (name == "s2_x_torus") return build_s2_torus(params);
  if (name == "product_spheres_torus") return build_product_spheres(params);
  if (name == "hopf_c2") return build_hopf(params);
  if (name == "power_sigma_ell") return build_power_sigma(params);
  if (name == "su2_cartan") return build_su2(params);
  if (name == "multimomentum_trivial") return build_multimomentum(params);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> scenario_catalog() {
  std::vector<std::string> names{"hopf_c2",       "multimomentum_trivial", "power_sigma_ell",
                                 "product_spheres_torus", "s2_x_torus",    "su2_cartan"};
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& n : names) out.push_back({n, build_scenario(n).description});
  return out;
}

}  // namespace plectic

#include "plectic/runner.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>

namespace plectic {

namespace {

struct CheckContext {
  const Scenario& scenario;
  Json overrides;
  std::uint64_t seed;
  double tol_scale;
};

struct CheckResult {
  std::string status = "pass";
  Json data;
  double tolerance = 0.0;
  Json grid_meta;
};

double opt(const Json& j, const std::string& key, double fallback) {
  if (j.contains(key)) {
    double v = j.at(key).get<double>();
    if (v <= 0) throw ConfigError("override '" + key + "' must be positive");
    return v;
  }
  return fallback;
}

int opti(const Json& j, const std::string& key, int fallback) {
  if (j.contains(key)) {
    int v = j.at(key).get<int>();
    if (v <= 0) throw ConfigError("override '" + key + "' must be positive");
    return v;
  }
  return fallback;
}

std::vector<double> optv(const Json& j, const std::string& key, std::vector<double> fallback) {
  if (j.contains(key)) {
    std::vector<double> v = j.at(key).get<std::vector<double>>();
    for (double x : v)
      if (x <= 0) throw ConfigError("override '" + key + "' must be positive");
    return v;
  }
  return fallback;
}

using CheckFn = CheckResult (*)(const CheckContext&);

CheckResult check_nondegeneracy(const CheckContext& ctx) {
  CheckResult r;
  const auto& cert = ctx.scenario.M.certificate;
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  r.tolerance = tol;
  r.data["max_d_omega"] = cert.max_domega;
  r.data["worst_sv_ratio"] = cert.worst_sv_ratio;
  r.data["sample_points"] = cert.points.size();
  r.status = (cert.max_domega <= tol && cert.nondegenerate) ? "pass" : "fail";
  return r;
}

CheckResult check_action_laws(const CheckContext& ctx) {
  CheckResult r;
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 60);
  r.tolerance = tol;
  auto rep = action_laws_report(ctx.scenario.M, ctx.scenario.action, ctx.scenario.M.chart->samples(n));
  r.data["homomorphism_defect"] = rep.homomorphism_defect;
  r.data["invariance_defect"] = rep.invariance_defect;
  r.status = (rep.homomorphism_defect <= tol && rep.invariance_defect <= tol) ? "pass" : "fail";
  return r;
}

CheckResult check_moment(const CheckContext& ctx) {
  CheckResult r;
  double dflt = ctx.scenario.name == "su2_cartan" ? 1e-6 : 1e-8;
  double tol = opt(ctx.overrides, "tol", dflt) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 80);
  r.tolerance = tol;
  auto rep = moment_check(ctx.scenario.M, ctx.scenario.action, ctx.scenario.mu,
                          ctx.scenario.M.chart->samples(n), ctx.seed);
  r.data["comoment_defect"] = rep.comoment_defect;
  r.data["leibniz_defect"] = rep.leibniz_defect;
  r.data["sign_characterization_defect"] = rep.sign_characterization_defect;
  if (rep.finite_equivariance_defect)
    r.data["finite_equivariance_defect"] = *rep.finite_equivariance_defect;
  r.status = rep.max_defect() <= tol ? "pass" : "fail";
  return r;
}

CheckResult check_split_verify(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.split) throw ConfigError("scenario has no split moment");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 60);
  r.tolerance = tol;
  auto rep = verify_split(ctx.scenario.M, ctx.scenario.action, ctx.scenario.mu, *ctx.scenario.split,
                          ctx.scenario.M.chart->samples(n));
  r.data["reproduce_defect"] = rep.reproduce_defect;
  r.data["eta_closed_defect"] = rep.eta_closed_defect;
  r.data["invariance_defect"] = rep.invariance_defect;
  r.data["horizontal_defect"] = rep.horizontal_defect;
  double m = std::max(std::max(rep.reproduce_defect, rep.eta_closed_defect),
                      std::max(rep.invariance_defect, rep.horizontal_defect));
  r.status = m <= tol ? "pass" : "fail";
  return r;
}

CheckResult check_split_level_set(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.split) throw ConfigError("scenario has no split moment");
  double tol = opt(ctx.overrides, "tol", 1e-6) * ctx.tol_scale;
  r.tolerance = tol;
  const int l = ctx.scenario.action.algebra.dim;
  Vec lambda(static_cast<std::size_t>(l), 1.0);
  if (ctx.overrides.contains("lambda")) {
    if (ctx.overrides.at("lambda").is_array())
      lambda = ctx.overrides.at("lambda").get<Vec>();
    else
      lambda.assign(static_cast<std::size_t>(l), ctx.overrides.at("lambda").get<double>());
  }
  std::vector<Vec> level_points;
  bool use_embed = ctx.scenario.presentation && l == 1 &&
                   !ctx.overrides.value("rejection_only", false);
  if (use_embed) {
    // only valid when the presentation sits at this lambda
    ReductionPresentation P = *ctx.scenario.presentation;
    if (std::abs(ctx.scenario.params.lambda - lambda[0]) < 1e-12 ||
        ctx.scenario.name == "product_spheres_torus") {
      for (const Vec& x : P.level_chart->samples(60)) level_points.push_back(P.embed.eval(x));
    }
  }
  auto rep = split_level_set(ctx.scenario.M, ctx.scenario.action, *ctx.scenario.split, lambda,
                             level_points, tol);
  r.data["lambda"] = lambda;
  r.data["level_point_count"] = rep.level_point_count;
  r.data["membership_disagreement"] = rep.membership_disagreement;
  r.data["min_jacobian_rank"] = rep.min_jacobian_rank;
  r.data["min_eta_norm"] = rep.min_eta_norm;
  r.data["locally_free"] = rep.locally_free;
  if (rep.vacuous) {
    r.status = "vacuous";
    return r;
  }
  r.status = (rep.membership_disagreement <= tol && rep.surjective && rep.locally_free &&
              rep.min_eta_norm > tol)
                 ? "pass"
                 : "fail";
  return r;
}

CheckResult check_equivariant_closed(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.split || !ctx.scenario.sigma) throw ConfigError("scenario lacks split data");
  double tol = opt(ctx.overrides, "tol", 1e-9) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 50);
  std::complex<double> z(ctx.overrides.value("zeta_re", 1.0), ctx.overrides.value("zeta_im", 0.0));
  r.tolerance = tol;
  auto rep = equivariant_closed_check(ctx.scenario.M, ctx.scenario.action, *ctx.scenario.sigma,
                                      *ctx.scenario.split, z, ctx.scenario.M.chart->samples(n));
  r.data["zeta_re"] = z.real();
  r.data["zeta_im"] = z.imag();
  r.data["exponential_defect"] = rep.exponential_defect;
  r.data["omega_mu_defect"] = rep.omega_mu_defect;
  r.status = rep.max_defect() <= tol ? "pass" : "fail";
  return r;
}

CheckResult check_fixed_points(const CheckContext& ctx) {
  CheckResult r;
  if (ctx.scenario.component_charts.empty())
    throw ConfigError("scenario declares no fixed-component charts");
  double wtol = opt(ctx.overrides, "weight_tol", 0.01) * ctx.tol_scale;
  r.tolerance = wtol;
  bool ok = true;
  Json comps = Json::array();
  for (const auto& fc : ctx.scenario.component_charts) {
    FixedPointOptions opts;
    opts.grid_per_dim = opti(ctx.overrides, "grid_per_dim", 21);
    auto found = fixed_point_locator(fc.M, fc.action, fc.sigma, fc.nu, opts);
    Json entry;
    entry["chart"] = fc.label;
    entry["components_found"] = found.size();
    if (found.size() != 1) {
      ok = false;
    } else {
      const auto& c = found.front();
      entry["weights"] = c.weights;
      entry["nu"] = c.nu_value;
      entry["nu_spread"] = c.nu_spread;
      entry["weights_integer"] = c.weights_integer;
      if (!c.weights_integer || c.weights.size() != fc.expected_weights.size()) ok = false;
      std::vector<double> exp_sorted = fc.expected_weights;
      std::sort(exp_sorted.begin(), exp_sorted.end());
      for (std::size_t q = 0; q < c.weights.size() && ok; ++q)
        if (std::abs(c.weights[q] - exp_sorted[q]) > wtol) ok = false;
      if (std::abs(c.nu_value.front() - fc.expected_nu) > 1e-6) ok = false;
    }
    comps.push_back(entry);
  }
  r.data["charts"] = comps;
  r.status = ok ? "pass" : "fail";
  return r;
}

HamiltonianForm random_polynomial_hamiltonian(const Scenario& s, std::mt19937_64& rng, double tol) {
  const int deg = s.M.k - 1;
  std::uniform_int_distribution<int> d(-2, 2);
  FormField alpha = make_form(s.M.chart, deg);
  const int n = s.M.chart->dim();
  for (auto& e : alpha.f.c) {
    Expr acc(static_cast<double>(d(rng)));
    for (int v = 0; v < n; ++v) {
      acc = acc + Expr(static_cast<double>(d(rng))) * Expr::var(v);
      for (int w = v; w < n; ++w)
        acc = acc + Expr(static_cast<double>(d(rng))) * Expr::var(v) * Expr::var(w);
    }
    e = acc;
  }
  return hamiltonian_field(s.M, alpha, 1, tol);
}

CheckResult check_bracket_laws(const CheckContext& ctx) {
  CheckResult r;
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  int triples = opti(ctx.overrides, "triples", 20);
  int nsamples = opti(ctx.overrides, "samples", 100);
  r.tolerance = tol;
  std::mt19937_64 rng(ctx.seed);
  auto pts = ctx.scenario.M.chart->samples(nsamples);
  double worst = 0;
  Json rows = Json::array();
  for (int t = 0; t < triples; ++t) {
    HamiltonianForm a = random_polynomial_hamiltonian(ctx.scenario, rng, tol);
    HamiltonianForm b = random_polynomial_hamiltonian(ctx.scenario, rng, tol);
    HamiltonianForm c = random_polynomial_hamiltonian(ctx.scenario, rng, tol);
    auto rep = bracket_laws_report(ctx.scenario.M, a, b, c, pts);
    worst = std::max(worst, rep.max_defect());
    if (t < 3) {
      Json row;
      row["jacobi"] = rep.jacobi_defect;
      row["antisymmetry"] = rep.antisymmetry_defect;
      row["field_pushforward"] = rep.field_pushforward_defect;
      rows.push_back(row);
    }
  }
  r.data["triples"] = triples;
  r.data["worst_defect"] = worst;
  r.data["first_rows"] = rows;
  r.status = worst <= tol ? "pass" : "fail";
  return r;
}

CheckResult check_leaf_restrict(const CheckContext& ctx) {
  CheckResult r;
  if (ctx.scenario.name != "s2_x_torus" || !ctx.scenario.params.with_circle)
    throw ConfigError("leaf_restrict is defined for the s2_x_torus scenario");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  r.tolerance = tol;
  const auto& M = ctx.scenario.M;
  auto leaf = make_chart("s2_leaf", {{"theta", 0, 2 * M_PI, true}, {"z", -1, 1, false}});
  double phi0 = ctx.overrides.value("phi0", 0.9);
  ChartMap j{leaf, M.chart, {Expr::var(0), Expr::var(1), Expr(phi0)}};
  FormField sigma = *ctx.scenario.sigma;
  FormField eta = ctx.scenario.split->eta;
  // independent factorization: sigma' = sigma + dz ^ dphi also divides omega
  FormField sigma_alt = sigma;
  sigma_alt.f.at(mask_of({1, 2})) = Expr(1.0);
  // the leaf hamiltonian defaults to the height z; configs may supply any
  // expression in the canonical prefix syntax
  Expr f = ctx.overrides.contains("f") ? Expr::parse(ctx.overrides.at("f").get<std::string>())
                                       : Expr::var(1);
  r.data["f"] = f.str();
  auto rep = leaf_restrict(M, sigma, eta, j, f, tol, sigma_alt);
  r.data["eta_closed"] = rep.eta_closed;
  r.data["factorization_ok"] = rep.factorization_ok;
  r.data["tangency_defect"] = rep.tangency_defect;
  r.data["pulled_sigma_closed_defect"] = rep.pulled_sigma_closed_defect;
  r.data["independence_defect"] = rep.independence_defect ? *rep.independence_defect : 0.0;
  r.data["hamiltonian_identity_defect"] = rep.hamiltonian_identity_defect;
  r.data["restricted_field_defect"] = rep.restricted_field_defect;
  r.data["min_singular_value_jsigma"] = rep.min_singular_value_jsigma;
  bool ok = rep.eta_closed && rep.factorization_ok && rep.leaf_tangent && rep.parts_ii_iii_run &&
            rep.pulled_sigma_closed_defect <= tol &&
            (!rep.independence_defect || *rep.independence_defect <= tol) &&
            rep.hamiltonian_identity_defect <= tol && rep.restricted_field_defect <= tol;
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_critical_vanishing(const CheckContext& ctx) {
  CheckResult r;
  if (ctx.scenario.component_charts.empty())
    throw ConfigError("scenario declares no compact component charts");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  r.tolerance = tol;
  bool ok = true;
  Json entries = Json::array();
  for (const auto& fc : ctx.scenario.component_charts) {
    CriticalVanishingOptions opts;
    opts.declared_compact = true;
    FormField eta_chart = fc.M.omega.f.degree == 2 ? scalar_field(fc.M.chart, Expr(1.0))
                                                   : make_form(fc.M.chart, 1);
    if (fc.M.omega.f.degree == 3) coeff(eta_chart, {2}) = Expr(1.0);
    Expr f = ctx.overrides.contains("f")
                 ? Expr::parse(ctx.overrides.at("f").get<std::string>())
                 : fc.nu.front();
    auto rep = critical_vanishing_check(fc.M, f, eta_chart, tol, opts);
    Json e;
    e["chart"] = fc.label;
    e["ran"] = rep.ran;
    e["critical_points"] = rep.critical_points.size();
    e["max_field_norm"] = rep.max_field_norm;
    entries.push_back(e);
    ok = ok && rep.ran && rep.vanishing_set_nonempty;
  }
  r.data["charts"] = entries;
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_basic_cr(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.presentation) throw ConfigError("scenario has no reduction presentation");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 50);
  r.tolerance = tol;
  auto rep = check_basic(*ctx.scenario.presentation, n, tol);
  r.data["phi_closed_defect"] = rep.phi_closed_defect;
  r.data["level_identity_defect"] = rep.level_identity_defect;
  r.data["field_restriction_defect"] = rep.field_restriction_defect;
  r.data["submersion_min_sv"] = rep.submersion_min_sv;
  r.data["fiber_defect"] = rep.fiber_defect;
  r.data["horizontality_defect"] = rep.horizontality_defect;
  r.data["invariance_defect"] = rep.invariance_defect;
  if (!rep.ok()) r.data["violated_hypothesis"] = rep.violated_hypothesis;
  r.status = rep.ok() ? "pass" : "fail";
  return r;
}

CheckResult check_reduced_form(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.presentation) throw ConfigError("scenario has no reduction presentation");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  int n = opti(ctx.overrides, "samples", 40);
  r.tolerance = tol;
  auto rep = reduced_form_report(*ctx.scenario.presentation, tol, n, ctx.seed);
  r.data["descent_residual"] = rep.descent_residual;
  r.data["closed_residual"] = rep.closed_residual;
  r.data["section_consistency"] = rep.section_consistency;
  bool ok = rep.ok && rep.closed_residual <= tol;
  if (ctx.overrides.contains("expected_integral")) {
    const ReductionPresentation& P = *ctx.scenario.presentation;
    FormField iomega = pullback(P.embed, P.ambient.omega);
    CycleSpec top;
    top.axes.resize(static_cast<std::size_t>(P.base_chart->dim()));
    for (int i = 0; i < P.base_chart->dim(); ++i) top.axes[static_cast<std::size_t>(i)] = i;
    top.fixed.assign(static_cast<std::size_t>(P.base_chart->dim()), 0.1);
    auto rng = std::make_shared<std::mt19937_64>(ctx.seed);
    double integral = integrate_cycle(P.base_chart, top, [&](const Vec& b) {
      return descend_at(P, iomega, b, *rng).value;
    });
    double expect = ctx.overrides.at("expected_integral").get<double>();
    double rel = opt(ctx.overrides, "integral_rel_tol", 1e-3);
    r.data["integral"] = integral;
    r.data["expected_integral"] = expect;
    ok = ok && std::abs(integral - expect) <= rel * std::abs(expect);
  }
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_reduce_dynamics(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.presentation) throw ConfigError("scenario has no reduction presentation");
  double tol = opt(ctx.overrides, "tol", 1e-7) * ctx.tol_scale;
  r.tolerance = tol;
  const Scenario& s = ctx.scenario;
  ReduceDynamicsReport rep;
  if (s.name == "hopf_c2") {
    // alpha = h(nu) dphi descends with zero reduced field (commuting pathway).
    Expr nu = s.split->nu.front();
    Expr h = ctx.overrides.value("linear_h", false) ? nu : nu * nu;
    FormField alpha = h * s.split->eta;
    HamiltonianForm a = hamiltonian_field(s.M, alpha, 1, tol);
    rep = reduce_dynamics(*s.presentation, a, ReduceDynamicsMode::commuting, tol);
  } else if (s.name == "product_spheres_torus") {
    // invariant 2-vector in closed form (case i pathway)
    VecField X = make_vecfield(s.M.chart, 2);
    coeff(X, {2, 4}) = Expr(1.0);  // dtheta2 ^ dphi
    FormField alpha = scalar_field(s.M.chart, Expr(0.0) - Expr::var(3));
    HamiltonianForm a = hamiltonian_field(s.M, alpha, 2, tol, X);
    rep = reduce_dynamics(*s.presentation, a, ReduceDynamicsMode::invariant_tangent, tol);
  } else {
    throw ConfigError("reduce_dynamics has no built-in field for this scenario");
  }
  r.data["precondition_defect"] = rep.precondition_defect;
  r.data["tangency_defect"] = rep.tangency_defect;
  r.data["welldef_defect"] = rep.welldef_defect;
  r.data["identity_defect"] = rep.identity_defect;
  if (!rep.failure.empty()) r.data["failure"] = rep.failure;
  r.status = (rep.ok() && rep.identity_defect <= tol && rep.welldef_defect <= tol) ? "pass" : "fail";
  return r;
}

CheckResult check_connection(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.presentation || ctx.scenario.tstar_fields.empty())
    throw ConfigError("scenario has no conjugate-distribution data");
  double tol = opt(ctx.overrides, "tol", 1e-6) * ctx.tol_scale;
  r.tolerance = tol;
  auto rep = connection_and_curvature(*ctx.scenario.presentation, *ctx.scenario.sigma,
                                      ctx.scenario.split->eta, ctx.scenario.tstar_fields, tol,
                                      ctx.scenario.chern_cycles, 60, ctx.seed);
  r.data["conjugacy"] = rep.conjugacy == ConjugacyVerdict::strongly_conjugate ? "strongly_conjugate"
                        : rep.conjugacy == ConjugacyVerdict::conjugate        ? "conjugate"
                                                                              : "not_conjugate";
  r.data["normalization_defect"] = rep.normalization_defect;
  r.data["factorization_defect"] = rep.factorization_defect;
  r.data["basic_defect"] = rep.basic_defect;
  r.data["chern_pairings"] = rep.chern_pairings;
  bool ok = rep.conjugacy == ConjugacyVerdict::strongly_conjugate &&
            rep.normalization_defect <= tol && rep.factorization_defect <= tol &&
            rep.basic_defect <= 1e-6;
  if (ctx.overrides.contains("expected_pairing")) {
    double expect = ctx.overrides.at("expected_pairing").get<double>();
    ok = ok && !rep.chern_pairings.empty() &&
         std::abs(std::abs(rep.chern_pairings.front()) - std::abs(expect)) <= tol;
    r.data["expected_pairing"] = expect;
  }
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_descend_eta(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.presentation) throw ConfigError("scenario has no reduction presentation");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  r.tolerance = tol;
  auto rep = descend_eta(*ctx.scenario.presentation, ctx.scenario.split->eta, tol, 40, ctx.seed);
  r.data["horizontal_defect"] = rep.horizontal_defect;
  r.data["closed_defect"] = rep.closed_defect;
  r.data["descent_residual"] = rep.descent_residual;
  r.status = rep.ok ? "pass" : "fail";
  return r;
}

CheckResult check_variation_slope(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.family) throw ConfigError("scenario has no presentation family");
  double tol = opt(ctx.overrides, "rel_tol", 0.01) * ctx.tol_scale;
  r.tolerance = tol;
  auto rep = variation_slope(*ctx.scenario.family, 1e-6, ctx.seed);
  r.data["lambda_grid"] = rep.lambda_grid;
  r.data["p_values"] = rep.p_values;
  r.data["slope"] = rep.slope;
  r.data["predicted_slope"] = rep.predicted_slope;
  r.data["chern_pairing"] = rep.chern_pairing;
  r.data["eta_integral"] = rep.eta_integral;
  r.data["fit_residual"] = rep.fit_residual;
  r.data["lemma_variation_defect"] = rep.lemma_variation_defect;
  r.data["relative_gap"] = rep.relative_gap;
  if (!rep.failure.empty()) r.data["failure"] = rep.failure;
  bool ok = rep.ok() && rep.relative_gap <= tol;
  if (ctx.overrides.contains("expected_slope")) {
    double expect = ctx.overrides.at("expected_slope").get<double>();
    r.data["expected_slope"] = expect;
    ok = ok && std::abs(rep.slope - expect) <= tol * std::abs(expect);
  }
  double lemma_tol = opt(ctx.overrides, "lemma_tol", 1e-6) * ctx.tol_scale;
  ok = ok && rep.lemma_variation_defect <= lemma_tol;
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_stationary_phase(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.localization) throw ConfigError("scenario has no localization data");
  double tol = opt(ctx.overrides, "tol", 1e-8) * ctx.tol_scale;
  r.tolerance = tol;
  std::vector<double> ts = optv(ctx.overrides, "t_values", {0.5, 1.0, 2.0});
  const auto& L = *ctx.scenario.localization;
  auto rep = stationary_phase_compare(L, ts, L.grid);
  r.grid_meta["gauss_n"] = L.grid.axes.front().gauss ? L.grid.axes.front().n : 0;
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json jr;
    jr["t"] = row.t;
    jr["lhs_re"] = row.lhs.real();
    jr["lhs_im"] = row.lhs.imag();
    jr["rhs_re"] = row.rhs.real();
    jr["rhs_im"] = row.rhs.imag();
    jr["rel_gap"] = row.rel_gap;
    rows.push_back(jr);
  }
  r.data["rows"] = rows;
  r.data["max_rel_gap"] = rep.max_rel_gap;
  if (!rep.failure.empty()) r.data["failure"] = rep.failure;
  r.status = (rep.ok() && rep.max_rel_gap <= tol) ? "pass" : "fail";
  return r;
}

CheckResult check_gaussian(const CheckContext& ctx) {
  CheckResult r;
  double tol = opt(ctx.overrides, "tol", 1e-7) * ctx.tol_scale;
  r.tolerance = tol;
  std::vector<int> ells{1, 2, 3};
  if (ctx.overrides.contains("ell")) ells = {opti(ctx.overrides, "ell", 1)};
  std::vector<double> ts = optv(ctx.overrides, "t_values", {0.3, 1.0, 3.0});
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  double worst = 0;
  Json rows = Json::array();
  for (int ell : ells)
    for (double t : ts) {
      Vec y(static_cast<std::size_t>(ell));
      for (auto& v : y) v = d(rng);
      auto rep = gaussian_check(ell, t, y);
      worst = std::max(worst, rep.max_gap());
      Json jr;
      jr["ell"] = ell;
      jr["t"] = t;
      jr["part_i_gap"] = rep.part_i_gap;
      jr["part_ii_gap"] = rep.part_ii_gap;
      rows.push_back(jr);
    }
  r.data["rows"] = rows;
  r.data["worst_gap"] = worst;
  r.status = worst <= tol ? "pass" : "fail";
  return r;
}

CheckResult check_heat_kernel(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.localization) throw ConfigError("scenario has no localization data");
  double t = opt(ctx.overrides, "t", 0.05);
  double tol = opt(ctx.overrides, "tol", 1e-3) * ctx.tol_scale;
  r.tolerance = tol;
  const auto& L = *ctx.scenario.localization;
  double I = heat_kernel_I(L, t, L.grid);
  r.data["t"] = t;
  r.data["I"] = I;
  bool ok = true;
  if (ctx.overrides.contains("expected")) {
    double expect = ctx.overrides.at("expected").get<double>();
    r.data["expected"] = expect;
    ok = std::abs(I - expect) <= tol * std::abs(expect);
  }
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_localization(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.localization || !ctx.scenario.reduced_data)
    throw ConfigError("scenario lacks localization or reduced-space data");
  double fit_tol = opt(ctx.overrides, "fit_tol", 0.05);
  double plateau_tol = opt(ctx.overrides, "plateau_tol", 1e-3) * ctx.tol_scale;
  r.tolerance = plateau_tol;
  std::vector<double> ts = optv(ctx.overrides, "t_grid", {0.02, 0.04, 0.07, 0.1, 0.14, 0.2});
  auto rep = localization_compare(*ctx.scenario.localization, *ctx.scenario.reduced_data, ts,
                                  ctx.scenario.localization->grid, fit_tol,
                                  opt(ctx.overrides, "spot_t", 0.1));
  r.data["t_grid"] = rep.t_grid;
  r.data["I_values"] = rep.I_values;
  r.data["rhs_values"] = rep.rhs_values;
  r.data["fitted_slope"] = rep.fitted_slope;
  r.data["slope_bound"] = rep.slope_bound;
  r.data["lemma_gap"] = rep.lemma_gap;
  if (!rep.failure.empty()) r.data["failure"] = rep.failure;
  bool ok = rep.ok() && rep.lemma_gap <= opt(ctx.overrides, "lemma_tol", 1e-6);
  if (ctx.overrides.contains("expected_plateau")) {
    double expect = ctx.overrides.at("expected_plateau").get<double>();
    r.data["expected_plateau"] = expect;
    r.data["plateau_at_first_t"] = rep.I_values.front();
    ok = ok && std::abs(rep.I_values.front() - expect) <= plateau_tol * std::abs(expect);
  }
  r.status = ok ? "pass" : "fail";
  return r;
}

CheckResult check_weyl_level(const CheckContext& ctx) {
  CheckResult r;
  if (!ctx.scenario.weyl_form) throw ConfigError("scenario has no Weyl comparison form");
  double tol = opt(ctx.overrides, "tol", 1e-6) * ctx.tol_scale;
  r.tolerance = tol;
  const FormField& W = *ctx.scenario.weyl_form;
  auto pts = ctx.scenario.M.chart->samples(400);
  // |W| < c * axis-distance comparability on both sides of a margin band
  double worst_near = 0.0;   // defect at points close to the torus axis
  double best_far = 1e300;   // defect at points far from it
  int near = 0, far = 0;
  for (const Vec& x : pts) {
    double dist = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    double defect = frobenius(eval_form(W, x));
    if (dist < 1e-7) {
      worst_near = std::max(worst_near, defect);
      ++near;
    } else if (dist > 0.05) {
      best_far = std::min(best_far, defect);
      ++far;
    }
  }
  // Halton samples rarely hit the axis; add explicit axis points.
  for (double t : {0.15, 0.5, 0.9, 1.3}) {
    double defect = frobenius(eval_form(W, {0.0, 0.0, t}));
    worst_near = std::max(worst_near, defect);
    ++near;
  }
  r.data["axis_defect"] = worst_near;
  r.data["off_axis_min_defect"] = best_far;
  r.data["near_points"] = near;
  r.data["far_points"] = far;
  r.status = (worst_near <= tol && best_far > 100 * tol) ? "pass" : "fail";
  return r;
}

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> reg{
      {"nondegeneracy", check_nondegeneracy},
      {"action_laws", check_action_laws},
      {"moment", check_moment},
      {"split_verify", check_split_verify},
      {"split_level_set", check_split_level_set},
      {"equivariant_closed", check_equivariant_closed},
      {"fixed_points", check_fixed_points},
      {"bracket_laws", check_bracket_laws},
      {"leaf_restrict", check_leaf_restrict},
      {"critical_vanishing", check_critical_vanishing},
      {"check_basic", check_basic_cr},
      {"reduced_form", check_reduced_form},
      {"reduce_dynamics", check_reduce_dynamics},
      {"connection_curvature", check_connection},
      {"descend_eta", check_descend_eta},
      {"variation_slope", check_variation_slope},
      {"stationary_phase", check_stationary_phase},
      {"gaussian", check_gaussian},
      {"heat_kernel", check_heat_kernel},
      {"localization", check_localization},
      {"weyl_level", check_weyl_level},
  };
  return reg;
}

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  if (!j.contains("scenario") || !j.at("scenario").contains("name"))
    throw ConfigError("config requires scenario.name");
  cfg.scenario_name = j.at("scenario").at("name").get<std::string>();
  if (j.at("scenario").contains("params")) {
    const Json& p = j.at("scenario").at("params");
    ScenarioParams& sp = cfg.params;
    sp.lambda = p.value("lambda", sp.lambda);
    sp.ell = p.value("ell", sp.ell);
    sp.torus_rank = p.value("torus_rank", sp.torus_rank);
    sp.m = p.value("m", sp.m);
    sp.k = p.value("k", sp.k);
    sp.mode = p.value("mode", sp.mode);
    sp.su2_action = p.value("su2_action", sp.su2_action);
    sp.with_circle = p.value("with_circle", sp.with_circle);
    sp.corrupt_phi = p.value("corrupt_phi", sp.corrupt_phi);
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output = j.value("output", std::string{});
  if (!j.contains("checks") || !j.at("checks").is_array() || j.at("checks").empty())
    throw ConfigError("config requires a non-empty checks array");
  for (const auto& c : j.at("checks")) {
    CheckRequest req;
    if (c.is_string()) {
      req.name = c.get<std::string>();
      req.overrides = Json::object();
    } else {
      req.name = c.at("name").get<std::string>();
      req.overrides = c;
      req.overrides.erase("name");
    }
    if (!registry().count(req.name)) throw ConfigError("unknown check '" + req.name + "'");
    cfg.checks.push_back(std::move(req));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return parse_config(j);
}

Json run_config(const RunConfig& cfg) {
  Scenario scenario = build_scenario(cfg.scenario_name, cfg.params);
  Json report;
  report["schema_version"] = 1;
  report["scenario"] = cfg.scenario_name;
  Json params;
  params["lambda"] = cfg.params.lambda;
  params["ell"] = cfg.params.ell;
  params["torus_rank"] = cfg.params.torus_rank;
  params["m"] = cfg.params.m;
  params["k"] = cfg.params.k;
  params["mode"] = cfg.params.mode;
  params["su2_action"] = cfg.params.su2_action;
  params["with_circle"] = cfg.params.with_circle;
  params["corrupt_phi"] = cfg.params.corrupt_phi;
  report["params"] = params;
  report["seed"] = cfg.seed;
  report["tol_scale"] = cfg.tol_scale;
  {
    const LieAlgebraSpec& a = scenario.action.algebra;
    Json alg;
    alg["name"] = a.name;
    alg["dim"] = a.dim;
    alg["structure_constants"] = a.structure;  // row-major in the canonical basis order
    std::vector<double> metric;
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j) metric.push_back(a.metric(i, j));
    alg["metric"] = metric;
    report["algebra"] = alg;
  }

  auto run_one = [&](const CheckRequest& req) {
    auto t0 = std::chrono::steady_clock::now();
    Json entry;
    entry["name"] = req.name;
    try {
      CheckContext ctx{scenario, req.overrides, cfg.seed, cfg.tol_scale};
      CheckResult res = registry().at(req.name)(ctx);
      entry["status"] = res.status;
      entry["tolerance"] = res.tolerance;
      entry["data"] = res.data;
      if (!res.grid_meta.empty()) entry["grid"] = res.grid_meta;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      entry["status"] = "fail";
      entry["data"] = Json{{"exception", e.what()}};
    }
    auto t1 = std::chrono::steady_clock::now();
    entry["wall_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return entry;
  };

  std::vector<Json> entries(cfg.checks.size());
  if (cfg.parallel) {
    std::vector<std::future<Json>> futs;
    for (const auto& req : cfg.checks)
      futs.push_back(std::async(std::launch::async, run_one, req));
    for (std::size_t i = 0; i < futs.size(); ++i) entries[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) entries[i] = run_one(cfg.checks[i]);
  }

  Json checks = Json::array();
  bool all = true;
  for (auto& e : entries) {
    if (e.at("status") == "fail") all = false;
    checks.push_back(std::move(e));
  }
  report["checks"] = checks;
  report["all_passed"] = all;
  return report;
}

bool report_all_passed(const Json& report) { return report.value("all_passed", false); }

std::string report_schema() {
  static const char* schema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "plectic scenario report",
  "type": "object",
  "required": ["schema_version", "scenario", "seed", "checks", "all_passed"],
  "properties": {
    "schema_version": {"type": "integer", "const": 1},
    "scenario": {"type": "string"},
    "params": {"type": "object"},
    "seed": {"type": "integer", "minimum": 0},
    "tol_scale": {"type": "number", "exclusiveMinimum": 0},
    "checks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "status", "wall_ms"],
        "properties": {
          "name": {"type": "string"},
          "status": {"enum": ["pass", "fail", "skipped", "vacuous"]},
          "tolerance": {"type": "number"},
          "data": {"type": "object"},
          "grid": {"type": "object"},
          "wall_ms": {"type": "number"}
        }
      }
    },
    "all_passed": {"type": "boolean"}
  }
})";
  return schema;
}

bool validate_report(const Json& report, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const char* key : {"schema_version", "scenario", "seed", "checks", "all_passed"})
    if (!report.contains(key)) return fail(std::string("missing field ") + key);
  if (!report.at("schema_version").is_number_integer() || report.at("schema_version") != 1)
    return fail("schema_version must be 1");
  if (!report.at("scenario").is_string()) return fail("scenario must be a string");
  if (!report.at("checks").is_array()) return fail("checks must be an array");
  if (!report.at("all_passed").is_boolean()) return fail("all_passed must be a boolean");
  static const std::set<std::string> statuses{"pass", "fail", "skipped", "vacuous"};
  for (const auto& c : report.at("checks")) {
    for (const char* key : {"name", "status", "wall_ms"})
      if (!c.contains(key)) return fail(std::string("check missing field ") + key);
    if (!statuses.count(c.at("status").get<std::string>())) return fail("bad check status");
    if (!c.at("wall_ms").is_number()) return fail("wall_ms must be a number");
  }
  return true;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << "usage: plectic-cli run <config.json> [--out path] [--tol-scale r] [--parallel]"
                 " [--seed n] | list-scenarios | schema\n";
    return 2;
  }
  const std::string& verb = args[0];
  if (verb == "schema") {
    std::cout << report_schema() << "\n";
    return 0;
  }
  if (verb == "list-scenarios") {
    for (const auto& [name, desc] : scenario_catalog())
      std::cout << name << "  --  " << desc << "\n";
    return 0;
  }
  if (verb != "run") {
    std::cerr << "unknown verb '" << verb << "'\n";
    return 2;
  }
  if (args.size() < 2) {
    std::cerr << "run requires a config path\n";
    return 2;
  }
  try {
    RunConfig cfg = load_config_file(args[1]);
    for (std::size_t i = 2; i < args.size(); ++i) {
      if (args[i] == "--out" && i + 1 < args.size()) {
        cfg.output = args[++i];
      } else if (args[i] == "--tol-scale" && i + 1 < args.size()) {
        cfg.tol_scale = std::stod(args[++i]);
        if (cfg.tol_scale <= 0) throw ConfigError("--tol-scale must be positive");
      } else if (args[i] == "--seed" && i + 1 < args.size()) {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(args[++i]));
      } else if (args[i] == "--parallel") {
        cfg.parallel = true;
      } else {
        throw ConfigError("unknown flag '" + args[i] + "'");
      }
    }
    Json report = run_config(cfg);
    std::string text = report.dump(2);
    if (!cfg.output.empty()) {
      std::ofstream out(cfg.output);
      if (!out) throw ConfigError("cannot write report to '" + cfg.output + "'");
      out << text << "\n";
    } else {
      std::cout << text << "\n";
    }
    return report_all_passed(report) ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace plectic

#include "plectic/reduction.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "plectic/quadrature.hpp"

namespace plectic {

AlternatingForm pullback_point(const std::vector<Vec>& jacobian, const AlternatingForm& a,
                               int source_dim) {
  const int rows = static_cast<int>(jacobian.size());
  AlternatingForm out(source_dim, a.degree);
  if (!out.stored() || !a.stored()) return out;
  Eigen::MatrixXd J(rows, source_dim);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < source_dim; ++j) J(i, j) = jacobian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::MatrixXd C = compound_matrix(J, a.degree);
  for (std::size_t jj = 0; jj < out.c.size(); ++jj) {
    double s = 0;
    for (std::size_t ii = 0; ii < a.c.size(); ++ii) s += a.c[ii] * C(static_cast<long>(ii), static_cast<long>(jj));
    out.c[jj] = s;
  }
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const std::vector<Vec>& J) {
  Eigen::MatrixXd M(static_cast<long>(J.size()), static_cast<long>(J.front().size()));
  for (long i = 0; i < M.rows(); ++i)
    for (long j = 0; j < M.cols(); ++j) M(i, j) = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

std::vector<Vec> from_eigen(const Eigen::MatrixXd& M) {
  std::vector<Vec> out(static_cast<std::size_t>(M.rows()), Vec(static_cast<std::size_t>(M.cols())));
  for (long i = 0; i < M.rows(); ++i)
    for (long j = 0; j < M.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);
  return out;
}

}  // namespace

BasicReport check_basic(const ReductionPresentation& P, int samples, double tol) {
  BasicReport rep;
  auto ambient_pts = P.ambient.chart->samples(samples);
  auto level_pts = P.level_chart->samples(samples);
  auto base_pts = P.base_chart->samples(samples);
  const int l = P.action.algebra.dim;
  const int nb = P.base_chart->dim();

  for (int i = 0; i < l; ++i)
    rep.phi_closed_defect =
        std::max(rep.phi_closed_defect,
                 sampled_max(exterior_derivative(P.phi[static_cast<std::size_t>(i)]), ambient_pts));

  FormField iomega = pullback(P.embed, P.ambient.omega);
  for (int i = 0; i < l; ++i) {
    FormField gap = pullback(P.embed, P.moment.components[static_cast<std::size_t>(i)]) -
                    pullback(P.embed, P.phi[static_cast<std::size_t>(i)]);
    rep.level_identity_defect = std::max(rep.level_identity_defect, sampled_max(gap, level_pts));

    // Restricted fields agree with the ambient fundamental fields through di.
    const VecField& lf = P.level_fields[static_cast<std::size_t>(i)];
    const VecField& af = P.action.fundamental_fields[static_cast<std::size_t>(i)];
    for (const Vec& x : level_pts) {
      auto J = P.embed.jacobian(x);
      MultiVector v = eval_field(lf, x);
      MultiVector a = eval_field(af, P.embed.eval(x));
      double d = 0;
      for (std::size_t r = 0; r < a.c.size(); ++r) {
        double push = 0;
        for (std::size_t q = 0; q < v.c.size(); ++q) push += J[r][q] * v.c[q];
        d = std::max(d, std::abs(push - a.c[r]));
      }
      rep.field_restriction_defect = std::max(rep.field_restriction_defect, d);
    }

    rep.horizontality_defect =
        std::max(rep.horizontality_defect, sampled_max(interior_product(lf, iomega), level_pts));
    rep.invariance_defect =
        std::max(rep.invariance_defect, sampled_max(lie_derivative(lf, iomega), level_pts));
  }

  rep.submersion_min_sv = 1e300;
  for (const Vec& x : level_pts) {
    Eigen::MatrixXd J = to_eigen(P.quotient.jacobian(x));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    rep.submersion_min_sv = std::min(rep.submersion_min_sv, svd.singularValues()(nb - 1));
    for (int i = 0; i < l; ++i) {
      MultiVector v = eval_field(P.level_fields[static_cast<std::size_t>(i)], x);
      Eigen::VectorXd vv(J.cols());
      for (long q = 0; q < J.cols(); ++q) vv(q) = v.c[static_cast<std::size_t>(q)];
      rep.fiber_defect = std::max(rep.fiber_defect, (J * vv).cwiseAbs().maxCoeff());
    }
  }

  for (const Vec& b : base_pts) {
    Vec round = P.quotient.eval(P.section.eval(b));
    Vec wrapped = P.base_chart->wrap(round);
    Vec bw = P.base_chart->wrap(b);
    for (int i = 0; i < nb; ++i) {
      double d = std::abs(wrapped[static_cast<std::size_t>(i)] - bw[static_cast<std::size_t>(i)]);
      const Coord& c = P.base_chart->coords[static_cast<std::size_t>(i)];
      if (c.periodic) d = std::min(d, c.period() - d);
      rep.section_defect = std::max(rep.section_defect, d);
    }
  }

  if (rep.phi_closed_defect > tol)
    rep.violated_hypothesis = "phi_not_closed";
  else if (rep.level_identity_defect > tol)
    rep.violated_hypothesis = "embedding_misses_level_set";
  else if (rep.field_restriction_defect > tol)
    rep.violated_hypothesis = "level_fields_mismatch";
  else if (rep.submersion_min_sv <= tol)
    rep.violated_hypothesis = "quotient_not_submersion";
  else if (rep.fiber_defect > tol)
    rep.violated_hypothesis = "fibers_not_orbits";
  else if (rep.section_defect > tol)
    rep.violated_hypothesis = "section_invalid";
  else if (rep.horizontality_defect > tol)
    rep.violated_hypothesis = "reduced_form_not_horizontal";
  else if (rep.invariance_defect > tol)
    rep.violated_hypothesis = "reduced_form_not_invariant";
  return rep;
}

DescentValue descend_at(const ReductionPresentation& P, const FormField& form_on_N, const Vec& b,
                        std::mt19937_64& rng) {
  DescentValue out;
  const int nb = P.base_chart->dim();
  const int nn = P.level_chart->dim();
  Vec x = P.section.eval(b);
  Eigen::MatrixXd J = to_eigen(P.quotient.jacobian(x));  // nb x nn
  // Minimum-norm right inverse of d pi.
  Eigen::MatrixXd R = J.transpose() * (J * J.transpose()).inverse();  // nn x nb
  AlternatingForm w = eval_form(form_on_N, x);
  out.value = pullback_point(from_eigen(R), w, nb);

  // Randomized second lift: add kernel components.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
  Eigen::MatrixXd V = svd.matrixV();
  const int kerdim = nn - nb;
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd R2 = R;
  for (int q = 0; q < kerdim; ++q) {
    Eigen::VectorXd kvec = V.col(nb + q);
    for (int j = 0; j < nb; ++j) R2.col(j) += d(rng) * kvec;
  }
  AlternatingForm alt = pullback_point(from_eigen(R2), w, nb);
  for (std::size_t i = 0; i < alt.c.size(); ++i)
    out.lift_discrepancy = std::max(out.lift_discrepancy, std::abs(alt.c[i] - out.value.c[i]));
  return out;
}

ReducedFormReport reduced_form_report(const ReductionPresentation& P, double tol, int base_samples,
                                      std::uint64_t seed) {
  ReducedFormReport rep;
  std::mt19937_64 rng(seed);
  FormField iomega = pullback(P.embed, P.ambient.omega);
  rep.closed_residual = sampled_max(exterior_derivative(iomega), P.level_chart->samples(base_samples));
  auto base_pts = P.base_chart->samples(base_samples);
  for (const Vec& b : base_pts) {
    DescentValue v = descend_at(P, iomega, b, rng);
    rep.descent_residual = std::max(rep.descent_residual, v.lift_discrepancy);
    // Independent fiber point through the second section.
    ReductionPresentation alt = P;
    alt.section = P.section2;
    DescentValue v2 = descend_at(alt, iomega, b, rng);
    for (std::size_t i = 0; i < v.value.c.size(); ++i)
      rep.section_consistency =
          std::max(rep.section_consistency, std::abs(v.value.c[i] - v2.value.c[i]));
  }
  rep.ok = rep.descent_residual <= tol && rep.section_consistency <= tol;
  return rep;
}

ReduceDynamicsReport reduce_dynamics(const ReductionPresentation& P, const HamiltonianForm& a,
                                     ReduceDynamicsMode mode, double tol, int base_samples,
                                     std::uint64_t seed) {
  ReduceDynamicsReport rep;
  std::mt19937_64 rng(seed);
  const int l = P.action.algebra.dim;
  const int nb = P.base_chart->dim();
  const int nn = P.level_chart->dim();
  const int na = P.ambient.chart->dim();
  auto level_pts = P.level_chart->samples(base_samples);

  if (mode == ReduceDynamicsMode::invariant_tangent) {
    if (!a.field) {
      rep.failure = "closed-form multivector field required for case i";
      return rep;
    }
    for (int i = 0; i < l; ++i)
      rep.precondition_defect = std::max(
          rep.precondition_defect,
          sampled_max(schouten_bracket(P.action.fundamental_fields[static_cast<std::size_t>(i)], *a.field),
                      P.ambient.chart->samples(base_samples)));
  } else {
    if (a.ell != 1) {
      rep.failure = "commuting mode requires ell = 1";
      return rep;
    }
    if (!a.field) {
      rep.failure = "closed-form field required";
      return rep;
    }
    auto pts = P.ambient.chart->samples(base_samples);
    for (int i = 0; i < l; ++i) {
      rep.precondition_defect = std::max(
          rep.precondition_defect,
          sampled_max(lie_derivative(*a.field, P.moment.components[static_cast<std::size_t>(i)]), pts));
      rep.precondition_defect = std::max(
          rep.precondition_defect,
          sampled_max(lie_derivative(*a.field, P.phi[static_cast<std::size_t>(i)]), pts));
    }
  }
  if (rep.precondition_defect > tol) {
    rep.failure = mode == ReduceDynamicsMode::invariant_tangent
                      ? "field not invariant"
                      : "brackets with the moment map do not vanish";
    return rep;
  }

  const int ell = a.ell;
  FormField dalpha = exterior_derivative(a.alpha);
  FormField idalpha = pullback(P.embed, dalpha);
  FormField iomega = pullback(P.embed, P.ambient.omega);

  auto descend_X = [&](const ChartMap& section, const Vec& b, double& tan_defect) {
    Vec x = section.eval(b);
    Vec y = P.embed.eval(x);
    MultiVector X = a.field_at(y);
    Eigen::MatrixXd Ji = to_eigen(P.embed.jacobian(x));  // na x nn
    Eigen::MatrixXd Ci = compound_matrix(Ji, ell);
    Eigen::VectorXd Xv(static_cast<long>(X.c.size()));
    for (std::size_t q = 0; q < X.c.size(); ++q) Xv(static_cast<long>(q)) = X.c[q];
    Eigen::VectorXd v = Ci.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(Xv);
    tan_defect = std::max(tan_defect, (Ci * v - Xv).norm());
    Eigen::MatrixXd Jp = to_eigen(P.quotient.jacobian(x));
    Eigen::MatrixXd Cp = compound_matrix(Jp, ell);
    Eigen::VectorXd xbar = Cp * v;
    MultiVector out(nb, ell);
    for (std::size_t q = 0; q < out.c.size(); ++q) out.c[q] = xbar(static_cast<long>(q));
    return out;
  };
  (void)na;
  (void)nn;

  auto base_pts = P.base_chart->samples(base_samples);
  for (const Vec& b : base_pts) {
    MultiVector X1 = descend_X(P.section, b, rep.tangency_defect);
    MultiVector X2 = descend_X(P.section2, b, rep.tangency_defect);
    for (std::size_t q = 0; q < X1.c.size(); ++q)
      rep.welldef_defect = std::max(rep.welldef_defect, std::abs(X1.c[q] - X2.c[q]));

    DescentValue w = descend_at(P, iomega, b, rng);
    DescentValue da = descend_at(P, idalpha, b, rng);
    AlternatingForm lhs = interior_product(X1, w.value);
    for (std::size_t q = 0; q < lhs.c.size(); ++q)
      rep.identity_defect = std::max(rep.identity_defect, std::abs(lhs.c[q] - da.value.c[q]));
  }
  (void)level_pts;
  if (rep.tangency_defect > tol) rep.failure = "X not tangent to level set";
  return rep;
}

double integrate_cycle(const ChartPtr& base, const CycleSpec& cycle,
                       const std::function<AlternatingForm(const Vec&)>& form_at) {
  const int p = static_cast<int>(cycle.axes.size());
  Mask cyc_mask = 0;
  for (int axp : cycle.axes) cyc_mask |= Mask{1} << axp;
  std::vector<Vec> nodes(static_cast<std::size_t>(p)), weights(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    const Coord& c = base->coords[static_cast<std::size_t>(cycle.axes[static_cast<std::size_t>(i)])];
    AxisRule r{!c.periodic, c.periodic ? cycle.trap_nodes : cycle.gauss_nodes};
    axis_nodes(c, r, nodes[static_cast<std::size_t>(i)], weights[static_cast<std::size_t>(i)]);
  }
  long total = 1;
  for (int i = 0; i < p; ++i) total *= static_cast<long>(nodes[static_cast<std::size_t>(i)].size());
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(total));
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    Vec b = cycle.fixed;
    double w = 1.0;
    for (int i = 0; i < p; ++i) {
      long idx = rem % static_cast<long>(nodes[static_cast<std::size_t>(i)].size());
      rem /= static_cast<long>(nodes[static_cast<std::size_t>(i)].size());
      b[static_cast<std::size_t>(cycle.axes[static_cast<std::size_t>(i)])] =
          nodes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx)];
      w *= weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx)];
    }
    AlternatingForm f = form_at(b);
    vals.push_back(w * f.at(cyc_mask));
  }
  return cycle.orientation * pairwise_sum(vals);
}

ConnectionReport connection_and_curvature(const ReductionPresentation& P, const FormField& sigma,
                                          const FormField& eta,
                                          const std::vector<VecField>& tstar_fields, double tol,
                                          const std::vector<CycleSpec>& chern_cycles, int samples,
                                          std::uint64_t seed) {
  if (!P.action.algebra.abelian())
    throw std::invalid_argument("connection_and_curvature: torus action required");
  ConnectionReport rep;
  const int l = P.action.algebra.dim;
  auto level_pts = P.level_chart->samples(samples);

  // Strong conjugacy of the fundamental and declared conjugate distributions,
  // sampled along the level set.
  {
    ConjugacyVerdict worst = ConjugacyVerdict::strongly_conjugate;
    for (std::size_t s = 0; s < level_pts.size(); s += std::max<std::size_t>(1, level_pts.size() / 10)) {
      Vec y = P.embed.eval(level_pts[s]);
      AlternatingForm w = eval_form(P.ambient.omega, y);
      std::vector<MultiVector> U, V;
      for (int i = 0; i < l; ++i) {
        U.push_back(eval_field(P.action.fundamental_fields[static_cast<std::size_t>(i)], y));
        V.push_back(eval_field(tstar_fields[static_cast<std::size_t>(i)], y));
      }
      ConjugacyReport c = classify_conjugacy(w, U, V, 1e-7);
      if (static_cast<int>(c.verdict) < static_cast<int>(worst)) worst = c.verdict;
    }
    rep.conjugacy = worst;
  }

  // Discrete cyclic averaging of sigma when finite maps are available.
  FormField sigma_avg = sigma;
  if (!P.action.group_maps.empty()) {
    FormField acc = make_form(sigma.chart, sigma.f.degree);
    for (const auto& g : P.action.group_maps) acc = acc + pullback(g.map, sigma);
    sigma_avg = Expr(1.0 / static_cast<double>(P.action.group_maps.size())) * acc;
    rep.averaging_defect = sampled_max(sigma_avg - sigma, P.ambient.chart->samples(samples));
  }

  // alpha^a = iota_{lambda_a} sigma; normalization alpha^a(xi_b) = -delta_ab,
  // and the defining factorization iota_lambda omega = alpha_lambda ^ eta
  // along the level set.
  std::vector<FormField> alpha;
  for (int a = 0; a < l; ++a) alpha.push_back(interior_product(tstar_fields[static_cast<std::size_t>(a)], sigma_avg));
  for (int a = 0; a < l; ++a) {
    FormField gap = interior_product(tstar_fields[static_cast<std::size_t>(a)], P.ambient.omega) -
                    wedge(alpha[static_cast<std::size_t>(a)], eta);
    for (const Vec& x : level_pts)
      rep.factorization_defect =
          std::max(rep.factorization_defect, frobenius(eval_form(gap, P.embed.eval(x))));
  }
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) {
      FormField pairing = interior_product(P.action.fundamental_fields[static_cast<std::size_t>(b)],
                                           alpha[static_cast<std::size_t>(a)]);
      double delta = a == b ? 1.0 : 0.0;
      FormField shifted = pairing + scalar_field(P.ambient.chart, Expr(delta));
      double d = 0;
      for (const Vec& x : level_pts) {
        Vec y = P.embed.eval(x);
        d = std::max(d, std::abs(eval_form(shifted, y).c[0]));
      }
      rep.normalization_defect = std::max(rep.normalization_defect, d);
    }
  if (rep.normalization_defect > tol) {
    // conjugacy data inconsistent with omega
    rep.chern_pairings.assign(chern_cycles.size(), 0.0);
    return rep;
  }

  // Curvature on N, checked basic, then descended.
  std::vector<FormField> curv;
  for (int a = 0; a < l; ++a) {
    FormField ia = pullback(P.embed, alpha[static_cast<std::size_t>(a)]);
    rep.connection_on_level.push_back(ia);
    FormField F = exterior_derivative(ia);
    for (int i = 0; i < l; ++i)
      rep.basic_defect = std::max(
          rep.basic_defect,
          sampled_max(interior_product(P.level_fields[static_cast<std::size_t>(i)], F), level_pts));
    curv.push_back(F);
  }

  auto rng = std::make_shared<std::mt19937_64>(seed);
  ReductionPresentation Pc = P;
  FormField F0 = curv.front();
  rep.curvature_at = [Pc, F0, rng](const Vec& b) {
    return descend_at(Pc, F0, b, *rng).value;
  };
  for (const auto& cyc : chern_cycles)
    rep.chern_pairings.push_back(integrate_cycle(P.base_chart, cyc, rep.curvature_at) / (2.0 * M_PI));
  return rep;
}

DescendEtaReport descend_eta(const ReductionPresentation& P, const FormField& eta, double tol,
                             int base_samples, std::uint64_t seed) {
  DescendEtaReport rep;
  auto level_pts = P.level_chart->samples(base_samples);
  FormField ieta = pullback(P.embed, eta);
  for (const auto& lf : P.level_fields)
    rep.horizontal_defect =
        std::max(rep.horizontal_defect, sampled_max(interior_or_zero_field(lf, ieta), level_pts));
  rep.closed_defect = sampled_max(exterior_derivative(ieta), level_pts);
  if (rep.horizontal_defect > tol) {
    rep.ok = false;
    return rep;
  }
  auto rng = std::make_shared<std::mt19937_64>(seed);
  ReductionPresentation Pc = P;
  rep.eta_at = [Pc, ieta, rng](const Vec& b) { return descend_at(Pc, ieta, b, *rng).value; };
  auto base_pts = P.base_chart->samples(base_samples);
  std::mt19937_64 rng2(seed + 1);
  for (const Vec& b : base_pts) {
    DescentValue v = descend_at(P, ieta, b, rng2);
    rep.descent_residual = std::max(rep.descent_residual, v.lift_discrepancy);
  }
  rep.ok = rep.descent_residual <= tol && rep.closed_defect <= tol;
  return rep;
}

VariationReport variation_slope(const PresentationFamily& family, double tol, std::uint64_t seed) {
  VariationReport rep;
  rep.lambda_grid = family.lambda_grid;
  std::mt19937_64 rng(seed);

  // Shared base chart is the trivialization hypothesis.
  ReductionPresentation P0 = family.at(family.lambda_grid[family.lambda_grid.size() / 2]);
  for (double lam : family.lambda_grid) {
    ReductionPresentation P = family.at(lam);
    if (P.base_chart->name != P0.base_chart->name || P.base_chart->dim() != P0.base_chart->dim()) {
      rep.failure = "presentations do not share the base chart";
      return rep;
    }
    FormField iomega = pullback(P.embed, P.ambient.omega);
    auto at = [&](const Vec& b) { return descend_at(P, iomega, b, rng).value; };
    rep.p_values.push_back(integrate_cycle(P.base_chart, family.top_cycle, at));
  }

  // Linear fit p(lambda) = slope * lambda + intercept.
  const std::size_t m = rep.p_values.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += rep.lambda_grid[i];
    sy += rep.p_values[i];
    sxx += rep.lambda_grid[i] * rep.lambda_grid[i];
    sxy += rep.lambda_grid[i] * rep.p_values[i];
  }
  double denom = m * sxx - sx * sx;
  rep.slope = (m * sxy - sx * sy) / denom;
  rep.intercept = (sy - rep.slope * sx) / m;
  for (std::size_t i = 0; i < m; ++i)
    rep.fit_residual = std::max(
        rep.fit_residual, std::abs(rep.p_values[i] - rep.slope * rep.lambda_grid[i] - rep.intercept));
  double scale = 0;
  for (double p : rep.p_values) scale = std::max(scale, std::abs(p));
  if (rep.fit_residual > tol * std::max(scale, 1.0)) {
    rep.failure = "family violates trivialization hypothesis or grid too coarse";
    return rep;
  }

  // Predicted slope: integral of F ^ eta_phi over the top cycle, plus the
  // factored pairings for the report.
  ConnectionReport conn = connection_and_curvature(P0, family.sigma, family.eta,
                                                   family.tstar_fields, 1e-6, {family.chern_cycle});
  DescendEtaReport etarep = descend_eta(P0, family.eta, 1e-6);
  rep.chern_pairing = conn.chern_pairings.empty() ? 0.0 : conn.chern_pairings.front();
  rep.eta_integral = integrate_cycle(P0.base_chart, family.eta_cycle, etarep.eta_at);
  auto wedge_at = [&](const Vec& b) { return wedge(conn.curvature_at(b), etarep.eta_at(b)); };
  rep.predicted_slope = integrate_cycle(P0.base_chart, family.top_cycle, wedge_at);
  rep.relative_gap = std::abs(rep.slope - rep.predicted_slope) /
                     std::max(std::abs(rep.predicted_slope), 1e-12);

  // Pointwise variation identity: pi* d_lambda omega_lambda = d i* iota_psi omega,
  // with the lambda derivative by Richardson-extrapolated centered differences.
  {
    double lam0 = family.lambda_grid[family.lambda_grid.size() / 2];
    ReductionPresentation P = family.at(lam0);
    FormField rhs_form =
        exterior_derivative(pullback(P.embed, interior_product(family.transverse, P.ambient.omega)));
    const double h = 1e-3;
    auto omega_at = [&](double lam, const Vec& b) {
      ReductionPresentation Pl = family.at(lam);
      FormField io = pullback(Pl.embed, Pl.ambient.omega);
      std::mt19937_64 r2(seed + 7);
      return descend_at(Pl, io, b, r2).value;
    };
    auto level_pts = P.level_chart->samples(12);
    for (const Vec& x : level_pts) {
      Vec b = P.quotient.eval(x);
      AlternatingForm p1 = omega_at(lam0 + h, b), m1 = omega_at(lam0 - h, b);
      AlternatingForm p2 = omega_at(lam0 + 2 * h, b), m2 = omega_at(lam0 - 2 * h, b);
      AlternatingForm dw(p1.dim, p1.degree);
      for (std::size_t q = 0; q < dw.c.size(); ++q) {
        double d1 = (p1.c[q] - m1.c[q]) / (2 * h);
        double d2 = (p2.c[q] - m2.c[q]) / (4 * h);
        dw.c[q] = (4.0 * d1 - d2) / 3.0;
      }
      AlternatingForm lhs = pullback_point(P.quotient.jacobian(x), dw, P.level_chart->dim());
      AlternatingForm rhs = eval_form(rhs_form, x);
      for (std::size_t q = 0; q < lhs.c.size(); ++q)
        rep.lemma_variation_defect =
            std::max(rep.lemma_variation_defect, std::abs(lhs.c[q] - rhs.c[q]));
    }
  }
  return rep;
}

}  // namespace plectic

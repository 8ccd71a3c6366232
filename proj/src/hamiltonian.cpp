#include "plectic/hamiltonian.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace plectic {

namespace {

bool all_constant(const FormField& f) {
  for (const auto& c : f.f.c)
    if (!c.is_constant()) return false;
  return true;
}

double rel_scale(const AlternatingForm& t) { return std::max(frobenius(t), 1.0); }

}  // namespace

FormField interior_or_zero_field(const VecField& X, const FormField& f) {
  if (X.v.degree > f.f.degree) return make_form(f.chart, f.f.degree - X.v.degree);
  return interior_product(X, f);
}

PlecticManifold make_plectic(ChartPtr chart, FormField omega, double tol, int sample_count,
                             double margin) {
  PlecticManifold M;
  M.chart = chart;
  M.omega = omega;
  M.k = omega.f.degree - 1;
  NondegCertificate cert;
  cert.points = chart->samples(sample_count, margin);
  FormField dom = exterior_derivative(omega);
  cert.max_domega = sampled_max(dom, cert.points);
  cert.worst_sv_ratio = 1.0;
  for (const Vec& x : cert.points) {
    AlternatingForm w = eval_form(omega, x);
    Eigen::MatrixXd A = flat_matrix(w);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    double ratio = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
    cert.worst_sv_ratio = std::min(cert.worst_sv_ratio, ratio);
  }
  cert.closed = cert.max_domega <= tol;
  cert.nondegenerate = cert.worst_sv_ratio > kDefaultRankTol;
  M.certificate = std::move(cert);
  return M;
}

HamiltonianForm hamiltonian_field(const PlecticManifold& M, const FormField& alpha, int ell,
                                  double tol, const std::optional<VecField>& ansatz) {
  if (alpha.f.degree != M.k - ell)
    throw std::invalid_argument("hamiltonian_field: alpha degree must be k - ell");
  HamiltonianForm h;
  h.alpha = alpha;
  h.ell = ell;
  FormField dalpha = exterior_derivative(alpha);

  if (ansatz) {
    h.field = ansatz;
  } else if (all_constant(M.omega)) {
    // One linear solve on coefficients: X = pinv(flat) * dalpha, closed form.
    AlternatingForm w0 = eval_form(M.omega, M.certificate.points.front());
    Eigen::MatrixXd A = flat_matrix_multi(w0, ell);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd pinv = svd.solve(Eigen::MatrixXd::Identity(A.rows(), A.rows()));
    VecField X = make_vecfield(M.chart, ell);
    for (long i = 0; i < pinv.rows(); ++i) {
      Expr acc(0.0);
      for (long j = 0; j < pinv.cols(); ++j) {
        double w = pinv(i, j);
        if (w == 0.0) continue;
        acc = acc + Expr(w) * dalpha.f.c[static_cast<std::size_t>(j)];
      }
      X.v.c[static_cast<std::size_t>(i)] = acc;
    }
    h.field = X;
  }

  if (h.field) {
    FormField defect = interior_product(*h.field, M.omega) - dalpha;
    h.worst_residual = 0.0;
    h.worst_point = M.certificate.points.front();
    for (const Vec& x : M.certificate.points) {
      double d = frobenius(eval_form(defect, x));
      double s = rel_scale(eval_form(dalpha, x));
      if (d / s > h.worst_residual) {
        h.worst_residual = d / s;
        h.worst_point = x;
      }
    }
    h.hamiltonian = h.worst_residual <= tol;
    VecField Xf = *h.field;
    h.field_at = [Xf](const Vec& x) { return eval_field(Xf, x); };
    return h;
  }

  // Numeric-pointwise representation.
  FormField omega_f = M.omega;
  FormField dalpha_f = dalpha;
  int ell_c = ell;
  double tol_c = tol;
  h.field_at = [omega_f, dalpha_f, ell_c, tol_c](const Vec& x) {
    FlatSolution s = solve_flat(eval_form(omega_f, x), eval_form(dalpha_f, x), ell_c, tol_c);
    return s.X;
  };
  h.worst_residual = 0.0;
  h.worst_point = M.certificate.points.front();
  for (const Vec& x : M.certificate.points) {
    FlatSolution s = solve_flat(eval_form(M.omega, x), eval_form(dalpha, x), ell, tol);
    double rel = s.residual / rel_scale(eval_form(dalpha, x));
    if (rel > h.worst_residual) {
      h.worst_residual = rel;
      h.worst_point = x;
    }
  }
  h.hamiltonian = h.worst_residual <= tol;
  return h;
}

FormField bracket(const PlecticManifold& M, const HamiltonianForm& a, const HamiltonianForm& b) {
  if (a.ell != 1 || b.ell != 1)
    throw std::invalid_argument("bracket: defined on Hamiltonian (k-1)-forms only (ell = 1)");
  if (!a.field) throw std::invalid_argument("bracket: left argument needs a closed-form field");
  (void)M;
  return lie_derivative(*a.field, b.alpha);
}

HamiltonianForm bracket_form(const PlecticManifold& M, const HamiltonianForm& a,
                             const HamiltonianForm& b, double tol) {
  FormField ab = bracket(M, a, b);
  std::optional<VecField> field;
  if (a.field && b.field) field = schouten_bracket(*a.field, *b.field);
  return hamiltonian_field(M, ab, 1, tol, field);
}

BracketLawsReport bracket_laws_report(const PlecticManifold& M, const HamiltonianForm& a,
                                      const HamiltonianForm& b, const HamiltonianForm& c,
                                      const std::vector<Vec>& samples) {
  if (!(a.field && b.field && c.field))
    throw std::invalid_argument("bracket_laws_report: closed-form fields required");
  BracketLawsReport rep;
  const VecField& Xa = *a.field;
  const VecField& Xb = *b.field;

  FormField ab = lie_derivative(Xa, b.alpha);
  FormField ba = lie_derivative(Xb, a.alpha);
  VecField Xab = schouten_bracket(Xa, Xb);

  // {a,{b,c}} - {{a,b},c} - {b,{a,c}}
  FormField jac = lie_derivative(Xa, lie_derivative(Xb, c.alpha)) -
                  lie_derivative(Xab, c.alpha) -
                  lie_derivative(Xb, lie_derivative(Xa, c.alpha));
  rep.jacobi_defect = sampled_max(jac, samples);

  // {a,b} + {b,a} - d(iota_{X_a} b + iota_{X_b} a)
  FormField exact = exterior_derivative(interior_or_zero_field(Xa, b.alpha) +
                                        interior_or_zero_field(Xb, a.alpha));
  rep.antisymmetry_defect = sampled_max(ab + ba - exact, samples);

  // iota_{[X_a,X_b]} omega - d{a,b}
  rep.field_pushforward_defect =
      sampled_max(interior_product(Xab, M.omega) - exterior_derivative(ab), samples);
  return rep;
}

LeafReport leaf_restrict(const PlecticManifold& M, const FormField& sigma, const FormField& eta,
                         const ChartMap& j, const Expr& f, double tol,
                         const std::optional<FormField>& sigma_alt, int leaf_samples) {
  LeafReport rep;
  auto ambient_pts = M.certificate.points;
  auto leaf_pts = j.source->samples(leaf_samples);

  rep.eta_closed = sampled_max(exterior_derivative(eta), ambient_pts) <= tol;
  rep.factorization_ok = sampled_max(M.omega - wedge(sigma, eta), ambient_pts) <= tol;

  // Tangency: every pushed-forward leaf basis vector contracts eta to ~0.
  const int nl = j.source->dim();
  const int na = M.chart->dim();
  double tangency = 0.0;
  for (const Vec& y : leaf_pts) {
    auto J = j.jacobian(y);
    AlternatingForm eta_x = eval_form(eta, j.eval(y));
    for (int b = 0; b < nl; ++b) {
      MultiVector v(na, 1);
      for (int i = 0; i < na; ++i)
        v.c[static_cast<std::size_t>(i)] = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
      tangency = std::max(tangency, max_abs(interior_product(v, eta_x)));
    }
  }
  rep.tangency_defect = tangency;
  rep.leaf_tangent = tangency <= tol;

  FormField jsigma = pullback(j, sigma);
  rep.pulled_sigma_closed_defect = sampled_max(exterior_derivative(jsigma), leaf_pts);

  if (sigma_alt) {
    FormField jalt = pullback(j, *sigma_alt);
    rep.independence_defect = sampled_max(jsigma - jalt, leaf_pts);
  }

  {
    double smin = 1e300;
    for (const Vec& y : leaf_pts) {
      Eigen::MatrixXd A = flat_matrix(eval_form(jsigma, y));
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
      smin = std::min(smin, static_cast<double>(svd.singularValues().minCoeff()));
    }
    rep.min_singular_value_jsigma = smin;
  }

  if (!rep.leaf_tangent) {
    rep.note = "leaf not integral to ker eta";
    return rep;
  }
  rep.parts_ii_iii_run = true;

  // Part ii: d j*f = j*(iota_X sigma) for X the Hamiltonian field of f*eta.
  FormField feta = Expr(f) * eta;
  HamiltonianForm hf = hamiltonian_field(M, feta, 1, tol);
  if (!hf.field) {
    rep.note = "no closed-form Hamiltonian field available";
    rep.parts_ii_iii_run = false;
    return rep;
  }
  FormField jf = make_form(j.source, 0);
  jf.f.c[0] = f.subst(j.components);
  FormField lhs = exterior_derivative(jf);
  FormField rhs = pullback(j, interior_product(*hf.field, sigma));
  rep.hamiltonian_identity_defect = sampled_max(lhs - rhs, leaf_pts);

  // Part iii: the restriction of X satisfies iota_{X|_L} j*sigma = d j*f.
  double part3 = 0.0;
  for (const Vec& y : leaf_pts) {
    MultiVector X = hf.field_at(j.eval(y));
    auto J = j.jacobian(y);
    Eigen::MatrixXd Jm(na, nl);
    for (int i = 0; i < na; ++i)
      for (int b = 0; b < nl; ++b)
        Jm(i, b) = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
    Eigen::VectorXd Xv(na);
    for (int i = 0; i < na; ++i) Xv(i) = X.c[static_cast<std::size_t>(i)];
    Eigen::VectorXd v = Jm.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(Xv);
    MultiVector vl(nl, 1);
    for (int b = 0; b < nl; ++b) vl.c[static_cast<std::size_t>(b)] = v(b);
    AlternatingForm want = eval_form(lhs, y);
    AlternatingForm got = interior_product(vl, eval_form(jsigma, y));
    for (std::size_t q = 0; q < want.c.size(); ++q)
      part3 = std::max(part3, std::abs(want.c[q] - got.c[q]));
  }
  rep.restricted_field_defect = part3;
  return rep;
}

CriticalVanishingReport critical_vanishing_check(const PlecticManifold& M, const Expr& f,
                                                 const FormField& eta, double tol,
                                                 const CriticalVanishingOptions& opts) {
  CriticalVanishingReport rep;
  const int n = M.chart->dim();
  bool all_periodic = true;
  for (const auto& c : M.chart->coords) all_periodic = all_periodic && c.periodic;
  if (!all_periodic && !opts.declared_compact) {
    rep.refusal = "chart has non-periodic coordinates and no compactness declaration";
    return rep;
  }
  rep.ran = true;
  const double grad_tol = std::min(opts.grad_tol, 0.05 * tol);

  std::vector<Expr> grad;
  for (int i = 0; i < n; ++i) grad.push_back(f.diff(i));
  std::vector<std::vector<Expr>> hess(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hess[static_cast<std::size_t>(i)].push_back(grad[static_cast<std::size_t>(i)].diff(j));
  auto grad2 = [&](const Vec& x) {
    double s = 0;
    for (const auto& g : grad) {
      double v = g.eval(x);
      s += v * v;
    }
    return s;
  };
  // Newton polish on grad f = 0 once gradient descent is near a zero.
  auto polish = [&](Vec x) {
    for (int it = 0; it < 8; ++it) {
      Eigen::VectorXd g(n);
      Eigen::MatrixXd H(n, n);
      for (int i = 0; i < n; ++i) {
        g(i) = grad[static_cast<std::size_t>(i)].eval(x);
        for (int j = 0; j < n; ++j) H(i, j) = hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
      }
      if (g.norm() < 1e-15) break;
      Eigen::VectorXd step = H.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(g);
      Vec y = x;
      for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] -= step(i);
      y = M.chart->wrap(y);
      if (!M.chart->contains(y, 0.0) || grad2(y) >= grad2(x)) break;
      x = y;
    }
    return x;
  };

  // Multistart gradient descent on |grad f|^2 from a coarse grid.
  std::vector<Vec> starts;
  {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      Vec x(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const Coord& c = M.chart->coords[static_cast<std::size_t>(i)];
        double u = (idx[static_cast<std::size_t>(i)] + 0.5) / opts.grid_per_dim;
        x[static_cast<std::size_t>(i)] = c.lo + u * c.period();
      }
      starts.push_back(std::move(x));
      int k2 = n - 1;
      while (k2 >= 0 && idx[static_cast<std::size_t>(k2)] == opts.grid_per_dim - 1) {
        idx[static_cast<std::size_t>(k2)] = 0;
        --k2;
      }
      if (k2 < 0) break;
      ++idx[static_cast<std::size_t>(k2)];
    }
  }

  std::vector<Expr> g2grad;  // gradient of |grad f|^2
  for (int i = 0; i < n; ++i) {
    Expr acc(0.0);
    for (int l = 0; l < n; ++l)
      acc = acc + Expr(2.0) * grad[static_cast<std::size_t>(l)] * grad[static_cast<std::size_t>(l)].diff(i);
    g2grad.push_back(acc);
  }

  std::vector<Vec> found;
  for (Vec x : starts) {
    double step = 0.25;
    double value = grad2(x);
    for (int it = 0; it < opts.max_iterations && value > grad_tol * grad_tol; ++it) {
      Vec dir(static_cast<std::size_t>(n));
      double norm = 0;
      for (int i = 0; i < n; ++i) {
        dir[static_cast<std::size_t>(i)] = g2grad[static_cast<std::size_t>(i)].eval(x);
        norm += dir[static_cast<std::size_t>(i)] * dir[static_cast<std::size_t>(i)];
      }
      norm = std::sqrt(norm);
      if (norm < 1e-300) break;
      bool moved = false;
      while (step > 1e-14) {
        Vec y = x;
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] -= step * dir[static_cast<std::size_t>(i)] / norm;
        y = M.chart->wrap(y);
        if (M.chart->contains(y, 0.0) && grad2(y) < value) {
          x = y;
          value = grad2(x);
          step *= 1.8;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    x = polish(x);
    value = grad2(x);
    if (std::sqrt(value) <= grad_tol) {
      bool dup = false;
      for (const Vec& p : found) {
        double d = 0;
        for (int i = 0; i < n; ++i) {
          const Coord& c = M.chart->coords[static_cast<std::size_t>(i)];
          double diff = std::abs(p[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
          if (c.periodic) diff = std::min(diff, c.period() - diff);
          d += diff * diff;
        }
        if (std::sqrt(d) < 1e-3) {
          dup = true;
          break;
        }
      }
      if (!dup) found.push_back(x);
    }
  }

  FormField feta = Expr(f) * eta;
  FormField dfeta = exterior_derivative(feta);
  for (const Vec& x : found) {
    rep.max_gradient = std::max(rep.max_gradient, std::sqrt(grad2(x)));
    FlatSolution s = solve_flat(eval_form(M.omega, x), eval_form(dfeta, x), 1, 1.0);
    rep.max_field_norm = std::max(rep.max_field_norm, frobenius(s.X));
  }
  rep.critical_points = std::move(found);
  rep.vanishing_set_nonempty = !rep.critical_points.empty() && rep.max_field_norm <= tol;
  return rep;
}

}  // namespace plectic

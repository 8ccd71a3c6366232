#include "plectic/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace plectic {

Eigen::MatrixXd flat_matrix_multi(const AlternatingForm& omega, int ell) {
  if (omega.degree < ell) throw std::invalid_argument("flat_matrix_multi: degree too low");
  const int n = omega.dim;
  const long rows = binom(n, omega.degree - ell);
  const long cols = binom(n, ell);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  const auto xmasks = mask_basis(n, ell);
  for (long j = 0; j < cols; ++j) {
    MultiVector e(n, ell);
    e.c[static_cast<std::size_t>(j)] = 1.0;
    AlternatingForm col = interior_product(e, omega);
    for (long i = 0; i < rows; ++i) A(i, j) = col.c[static_cast<std::size_t>(i)];
  }
  (void)xmasks;
  return A;
}

Eigen::MatrixXd flat_matrix(const AlternatingForm& omega) {
  if (omega.degree < 1) throw std::invalid_argument("flat_matrix: degree must be >= 1");
  return flat_matrix_multi(omega, 1);
}

NondegeneracyReport nondegeneracy_check(const AlternatingForm& omega, double tol) {
  if (tol <= 0) throw std::invalid_argument("nondegeneracy_check: tol must be positive");
  NondegeneracyReport rep;
  Eigen::MatrixXd A = flat_matrix(omega);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax && smax > 0) ++rank;
  rep.nondegenerate = (rank == omega.dim);
  if (!rep.nondegenerate) {
    Eigen::MatrixXd V = svd.matrixV();
    for (int j = rank; j < V.cols(); ++j) {
      std::vector<double> k(static_cast<std::size_t>(omega.dim));
      for (int i = 0; i < omega.dim; ++i) k[static_cast<std::size_t>(i)] = V(i, j);
      rep.kernel_basis.push_back(std::move(k));
    }
    // A zero form has a rank-0 flat map; report the full standard basis.
    if (smax == 0 && rep.kernel_basis.empty()) {
      for (int j = 0; j < omega.dim; ++j) {
        std::vector<double> k(static_cast<std::size_t>(omega.dim), 0.0);
        k[static_cast<std::size_t>(j)] = 1.0;
        rep.kernel_basis.push_back(std::move(k));
      }
    }
  }
  return rep;
}

FlatSolution solve_flat(const AlternatingForm& omega, const AlternatingForm& target, int ell,
                        double tol) {
  if (target.degree != omega.degree - ell)
    throw std::invalid_argument("solve_flat: target degree must be omega degree - ell");
  FlatSolution sol;
  Eigen::MatrixXd A = flat_matrix_multi(omega, ell);
  Eigen::VectorXd t(A.rows());
  for (long i = 0; i < A.rows(); ++i) t(i) = target.c[static_cast<std::size_t>(i)];
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd x = svd.solve(t);
  sol.target_norm = t.norm();
  sol.residual = (A * x - t).norm();
  sol.X = MultiVector(omega.dim, ell);
  for (long j = 0; j < A.cols(); ++j) sol.X.c[static_cast<std::size_t>(j)] = x(j);
  sol.solved = sol.residual <= tol * std::max(sol.target_norm, 1.0);
  return sol;
}

ConjugacyReport classify_conjugacy(const AlternatingForm& omega,
                                   const std::vector<MultiVector>& U,
                                   const std::vector<MultiVector>& V,
                                   double tol) {
  ConjugacyReport rep;
  const int n = omega.dim;
  const int k = omega.degree - 1;
  const long w = binom(n, k - 1 >= 0 ? k - 1 : 0);
  if (U.empty() || V.empty()) {
    rep.reason = "empty basis";
    return rep;
  }
  const long nu = static_cast<long>(U.size());
  const long nv = static_cast<long>(V.size());
  // Stack iota_Y iota_X omega over all pairs; X contracts first.
  Eigen::MatrixXd P(nu * nv, w);
  for (long a = 0; a < nu; ++a) {
    AlternatingForm ix = interior_product(U[static_cast<std::size_t>(a)], omega);
    for (long b = 0; b < nv; ++b) {
      AlternatingForm pair = interior_product(V[static_cast<std::size_t>(b)], ix);
      for (long j = 0; j < w; ++j) P(a * nv + b, j) = pair.c[static_cast<std::size_t>(j)];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  rep.rank_singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax <= 0) {
    rep.reason = "all pairings vanish";
    return rep;
  }
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  if (rank != 1) {
    rep.reason = rank == 0 ? "all pairings vanish" : "pairing image has rank >= 2";
    return rep;
  }
  // Extract eta from the leading right singular vector, normalized so its
  // largest coefficient is +1.
  Eigen::VectorXd eta = svd.matrixV().col(0);
  int imax = 0;
  for (int i = 1; i < eta.size(); ++i)
    if (std::abs(eta(i)) > std::abs(eta(imax))) imax = i;
  eta /= eta(imax);
  AlternatingForm etaF(n, k - 1);
  for (long j = 0; j < w; ++j) etaF.c[static_cast<std::size_t>(j)] = eta(j);
  rep.eta = etaF;
  const double eta2 = eta.squaredNorm();
  rep.pairing_matrix = Eigen::MatrixXd::Zero(nu, nv);
  for (long a = 0; a < nu; ++a)
    for (long b = 0; b < nv; ++b)
      rep.pairing_matrix(a, b) = P.row(a * nv + b).dot(eta) / eta2;
  if (nu != nv) {
    rep.reason = "pairing matrix not square";
    return rep;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> psvd(rep.pairing_matrix);
  const auto& psv = psvd.singularValues();
  if (psv(psv.size() - 1) <= tol * psv(0) || psv(0) <= 0) {
    rep.reason = "singular pairing matrix";
    return rep;
  }
  rep.verdict = ConjugacyVerdict::conjugate;
  // Strong conjugacy: least squares for a 2-form with
  // iota_Y iota_X omega = sigma(X, Y) eta over the pair basis.
  const long m2 = binom(n, 2);
  Eigen::MatrixXd A(nu * nv, m2);
  Eigen::VectorXd rhs(nu * nv);
  const auto masks2 = mask_basis(n, 2);
  for (long a = 0; a < nu; ++a)
    for (long b = 0; b < nv; ++b) {
      rhs(a * nv + b) = rep.pairing_matrix(a, b);
      for (long j = 0; j < m2; ++j) {
        AlternatingForm basis2(n, 2);
        basis2.c[static_cast<std::size_t>(j)] = 1.0;
        AlternatingForm s1 = interior_product(U[static_cast<std::size_t>(a)], basis2);
        AlternatingForm s2 = interior_product(V[static_cast<std::size_t>(b)], s1);
        A(a * nv + b, j) = s2.c[0];
      }
    }
  (void)masks2;
  Eigen::BDCSVD<Eigen::MatrixXd> lsq(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sig = lsq.solve(rhs);
  rep.sigma_residual = (A * sig - rhs).norm();
  if (rep.sigma_residual <= tol * std::max(rhs.norm(), 1.0)) {
    AlternatingForm sigmaF(n, 2);
    for (long j = 0; j < m2; ++j) sigmaF.c[static_cast<std::size_t>(j)] = sig(j);
    rep.sigma = sigmaF;
    rep.verdict = ConjugacyVerdict::strongly_conjugate;
  }
  return rep;
}

Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& J, int p) {
  const int rows = static_cast<int>(J.rows());
  const int cols = static_cast<int>(J.cols());
  const auto rmasks = mask_basis(rows, p);
  const auto cmasks = mask_basis(cols, p);
  Eigen::MatrixXd C(static_cast<long>(rmasks.size()), static_cast<long>(cmasks.size()));
  for (std::size_t i = 0; i < rmasks.size(); ++i) {
    const auto ri = mask_entries(rmasks[i]);
    for (std::size_t j = 0; j < cmasks.size(); ++j) {
      const auto cj = mask_entries(cmasks[j]);
      Eigen::MatrixXd sub(p, p);
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) sub(a, b) = J(ri[static_cast<std::size_t>(a)], cj[static_cast<std::size_t>(b)]);
      C(static_cast<long>(i), static_cast<long>(j)) = p == 0 ? 1.0 : sub.determinant();
    }
  }
  return C;
}

double max_abs(const AltCoeffs<double>& a) {
  double m = 0.0;
  for (double x : a.c) m = std::max(m, std::abs(x));
  return m;
}

double frobenius(const AltCoeffs<double>& a) {
  double s = 0.0;
  for (double x : a.c) s += x * x;
  return std::sqrt(s);
}

}  // namespace plectic

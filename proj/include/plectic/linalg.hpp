#ifndef PLECTIC_LINALG_HPP
#define PLECTIC_LINALG_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "plectic/alternating.hpp"

namespace plectic {

inline constexpr double kDefaultRankTol = 1e-9;

// Matrix of X -> iota_X omega on degree-l multivectors: column r holds the
// coefficients of iota_{e_I(r)} omega in colex order.
Eigen::MatrixXd flat_matrix_multi(const AlternatingForm& omega, int ell);

// Column j is iota_{e_j} omega; shape C(n, k) x n for a (k+1)-form.
Eigen::MatrixXd flat_matrix(const AlternatingForm& omega);

struct NondegeneracyReport {
  bool nondegenerate = false;
  std::vector<double> singular_values;
  // Orthonormal kernel basis of the flat map, one fiber vector per column
  // (empty when nondegenerate).
  std::vector<std::vector<double>> kernel_basis;
};

NondegeneracyReport nondegeneracy_check(const AlternatingForm& omega, double tol = kDefaultRankTol);

struct FlatSolution {
  bool solved = false;
  MultiVector X;
  double residual = 0.0;  // |iota_X omega - target|, absolute
  double target_norm = 0.0;
};

// Least-squares (minimum-norm) solve of iota_X omega = target over degree-l
// multivectors. Residual above tol * max(|target|, 1) means the target is not
// in the image, i.e. not Hamiltonian at this point.
FlatSolution solve_flat(const AlternatingForm& omega, const AlternatingForm& target, int ell,
                        double tol = kDefaultRankTol);

enum class ConjugacyVerdict { not_conjugate, conjugate, strongly_conjugate };

struct ConjugacyReport {
  ConjugacyVerdict verdict = ConjugacyVerdict::not_conjugate;
  std::string reason;
  std::optional<AlternatingForm> eta;    // degree k-1, normalized to unit max coefficient
  std::optional<AlternatingForm> sigma;  // degree 2, least-squares factor
  Eigen::MatrixXd pairing_matrix;        // |U| x |V| coefficients against eta
  std::vector<double> rank_singular_values;
  double sigma_residual = 0.0;
};

// Classifies the pairing (X, Y) -> iota_Y iota_X omega on the supplied bases.
// Contraction order is X first, then Y.
ConjugacyReport classify_conjugacy(const AlternatingForm& omega,
                                   const std::vector<MultiVector>& U,
                                   const std::vector<MultiVector>& V,
                                   double tol = kDefaultRankTol);

// p-th compound matrix: entry (I, J) = det of the submatrix of rows I and
// columns J, both in colex order. Represents the induced map on degree-p
// multivectors.
Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& J, int p);

double max_abs(const AltCoeffs<double>& a);
double frobenius(const AltCoeffs<double>& a);

}  // namespace plectic

#endif

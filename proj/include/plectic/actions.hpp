#ifndef PLECTIC_ACTIONS_HPP
#define PLECTIC_ACTIONS_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <string>

#include "plectic/hamiltonian.hpp"

namespace plectic {

struct LieAlgebraSpec {
  int dim = 0;
  // c^k_{ij}, flattened row-major as structure[(k*dim + i)*dim + j].
  std::vector<double> structure;
  Eigen::MatrixXd metric;  // invariant inner product on the algebra
  std::string name;

  double c(int k, int i, int j) const {
    return structure[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
  Vec bracket(const Vec& xi, const Vec& zeta) const;
  bool abelian() const;

  double antisymmetry_defect() const;
  double jacobi_defect() const;
  double metric_invariance_defect() const;
};

LieAlgebraSpec abelian_algebra(int dim, std::string name);
LieAlgebraSpec su2_algebra();  // orthonormal basis with [e_i, e_j] = eps_ijk e_k

struct GroupElementMap {
  std::string label;
  ChartMap map;        // action of the element on the chart
  Eigen::MatrixXd Ad;  // adjoint matrix of the element
};

struct GroupActionSpec {
  LieAlgebraSpec algebra;
  std::vector<VecField> fundamental_fields;  // one degree-1 field per basis element
  std::vector<GroupElementMap> group_maps;   // optional finite spot-check data
};

VecField fundamental_field(const GroupActionSpec& A, const Vec& xi);

struct ActionLawsReport {
  double homomorphism_defect = 0.0;  // [xi_i, xi_j] vs (c^k_ij xi_k) underline
  double invariance_defect = 0.0;    // L_xi omega
};

ActionLawsReport action_laws_report(const PlecticManifold& M, const GroupActionSpec& A,
                                    const std::vector<Vec>& samples);

struct MomentMapForm {
  std::vector<FormField> components;  // mu_xi for each algebra basis element

  FormField component(const Vec& xi) const;
};

struct MomentCheckReport {
  double comoment_defect = 0.0;                       // |d mu_xi - iota_xi omega|
  double leibniz_defect = 0.0;                        // |{mu_xi, mu_zeta} - mu_[xi,zeta]|
  double sign_characterization_defect = 0.0;          // vs (-1)^k omega(X_1..X_k, xi)
  std::optional<double> finite_equivariance_defect;   // Ad*-twisted pullback, when maps exist
  double max_defect() const;
};

MomentCheckReport moment_check(const PlecticManifold& M, const GroupActionSpec& A,
                               const MomentMapForm& mu, const std::vector<Vec>& samples,
                               std::uint64_t seed = 12345);

enum class SplitFlavor { plain, invariant, basic };

struct SplitMoment {
  std::vector<Expr> nu;  // one scalar per basis element
  FormField eta;         // closed (k-1)-form
  SplitFlavor flavor = SplitFlavor::plain;

  Expr nu_component(const Vec& xi) const;
};

struct SplitVerifyReport {
  double reproduce_defect = 0.0;  // |nu_xi * eta - mu_xi|
  double eta_closed_defect = 0.0;
  double invariance_defect = 0.0;  // L_xi eta (invariant and basic flavors)
  double horizontal_defect = 0.0;  // iota_xi eta (basic flavor)
};

SplitVerifyReport verify_split(const PlecticManifold& M, const GroupActionSpec& A,
                               const MomentMapForm& mu, const SplitMoment& S,
                               const std::vector<Vec>& samples);

struct LevelSetReport {
  bool vacuous = false;  // no sampled points on the level
  bool locally_free = true;
  double membership_disagreement = 0.0;  // |nu - lambda| vs |mu - lambda ^ eta| iff gap
  int min_jacobian_rank = 0;             // of d nu at level points
  bool surjective = false;
  double min_eta_norm = 0.0;  // eta along the level set
  int level_point_count = 0;
};

// Verifies the split level-set identities at the given level points
// (scenario-embedded when available, otherwise rejection-sampled from the
// ambient chart with |nu - lambda| < band).
LevelSetReport split_level_set(const PlecticManifold& M, const GroupActionSpec& A,
                               const SplitMoment& S, const Vec& lambda,
                               std::vector<Vec> level_points, double tol,
                               double rejection_band = 1e-2, int ambient_samples = 4000);

struct EquivariantClosedReport {
  double exponential_defect = 0.0;  // d_g(e^{z(sigma+nu)} eta)
  double omega_mu_defect = 0.0;     // d_g(omega + mu)
  double max_defect() const { return std::max(exponential_defect, omega_mu_defect); }
};

// Evaluates the equivariant differential d(.) - iota_xi(.) degreewise on the
// polynomial truncation of e^{z(sigma+nu)} eta and on omega + mu. Requires a
// basic splitting.
EquivariantClosedReport equivariant_closed_check(const PlecticManifold& M,
                                                 const GroupActionSpec& A,
                                                 const FormField& sigma, const SplitMoment& S,
                                                 std::complex<double> z,
                                                 const std::vector<Vec>& samples);

struct FixedComponent {
  Vec representative;
  std::vector<Vec> points;          // grid points of the component
  std::vector<double> weights;      // signed transverse rotation weights
  bool weights_integer = true;
  Vec nu_value;                     // per algebra basis element
  double nu_spread = 0.0;           // max variation of nu over the component
};

struct FixedPointOptions {
  int grid_per_dim = 25;
  double field_tol = 1e-6;
  double weight_integer_tol = 0.01;
};

// Finds connected sampled components where all fundamental fields vanish;
// estimates signed rotation weights from the linearized generator, with the
// sign taken against sigma on each invariant plane.
std::vector<FixedComponent> fixed_point_locator(const PlecticManifold& M,
                                                const GroupActionSpec& A,
                                                const FormField& sigma,
                                                const std::vector<Expr>& nu,
                                                const FixedPointOptions& opts = {});

}  // namespace plectic

#endif

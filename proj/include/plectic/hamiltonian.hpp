#ifndef PLECTIC_HAMILTONIAN_HPP
#define PLECTIC_HAMILTONIAN_HPP

#include <functional>
#include <optional>
#include <string>

#include "plectic/chart.hpp"
#include "plectic/linalg.hpp"

namespace plectic {

struct NondegCertificate {
  std::vector<Vec> points;
  double max_domega = 0.0;
  double worst_sv_ratio = 0.0;  // min over points of s_min/s_max of the flat matrix
  bool closed = false;
  bool nondegenerate = false;
  bool ok() const { return closed && nondegenerate; }
};

// A chart together with a closed nondegenerate (k+1)-form, certified at
// quasi-random sample points.
struct PlecticManifold {
  ChartPtr chart;
  FormField omega;
  int k = 1;
  NondegCertificate certificate;
};

PlecticManifold make_plectic(ChartPtr chart, FormField omega, double tol = 1e-8,
                             int sample_count = 60, double margin = 0.05);

struct HamiltonianForm {
  FormField alpha;
  int ell = 1;
  std::optional<VecField> field;  // closed form, when omega is constant or an ansatz was given
  std::function<MultiVector(const Vec&)> field_at;
  bool hamiltonian = false;
  double worst_residual = 0.0;
  Vec worst_point;
};

// Solves d alpha = iota_X omega for a degree-ell multivector field. With an
// ansatz the field is verified, not solved. With constant-coefficient omega
// the solve is done once on coefficients and the field is closed form.
// Otherwise the field is numeric-pointwise.
HamiltonianForm hamiltonian_field(const PlecticManifold& M, const FormField& alpha, int ell,
                                  double tol = 1e-9,
                                  const std::optional<VecField>& ansatz = std::nullopt);

// {a, b} = L_{X_a} b.alpha. Both arguments must have ell = 1 and a must carry
// a closed-form field.
FormField bracket(const PlecticManifold& M, const HamiltonianForm& a, const HamiltonianForm& b);

// The bracket packaged with its field [X_a, X_b].
HamiltonianForm bracket_form(const PlecticManifold& M, const HamiltonianForm& a,
                             const HamiltonianForm& b, double tol = 1e-9);

struct BracketLawsReport {
  double jacobi_defect = 0.0;
  double antisymmetry_defect = 0.0;
  double field_pushforward_defect = 0.0;
  double max_defect() const {
    return std::max(jacobi_defect, std::max(antisymmetry_defect, field_pushforward_defect));
  }
};

BracketLawsReport bracket_laws_report(const PlecticManifold& M, const HamiltonianForm& a,
                                      const HamiltonianForm& b, const HamiltonianForm& c,
                                      const std::vector<Vec>& samples);

struct LeafReport {
  bool eta_closed = false;
  bool factorization_ok = false;  // omega = sigma ^ eta at samples
  bool leaf_tangent = false;      // image of j tangent to ker eta
  double tangency_defect = 0.0;
  double pulled_sigma_closed_defect = 0.0;          // part i
  std::optional<double> independence_defect;        // part i', when sigma_alt given
  double hamiltonian_identity_defect = 0.0;         // part ii
  double restricted_field_defect = 0.0;             // part iii
  bool parts_ii_iii_run = false;
  double min_singular_value_jsigma = 0.0;  // recorded, not judged
  std::string note;
};

LeafReport leaf_restrict(const PlecticManifold& M, const FormField& sigma, const FormField& eta,
                         const ChartMap& j, const Expr& f, double tol,
                         const std::optional<FormField>& sigma_alt = std::nullopt,
                         int leaf_samples = 60);

struct CriticalVanishingReport {
  bool ran = false;
  std::string refusal;  // set when the compactness declaration is missing
  std::vector<Vec> critical_points;
  double max_gradient = 0.0;   // of f at the accepted points
  double max_field_norm = 0.0; // of the solved Hamiltonian field there
  bool vanishing_set_nonempty = false;
};

struct CriticalVanishingOptions {
  bool declared_compact = false;
  double grad_tol = 1e-7;
  int grid_per_dim = 7;
  int max_iterations = 400;
};

// Locates approximate critical points of f and verifies the Hamiltonian field
// of f*eta vanishes there. Requires all coordinates periodic or an explicit
// compactness declaration from the scenario.
CriticalVanishingReport critical_vanishing_check(const PlecticManifold& M, const Expr& f,
                                                 const FormField& eta, double tol,
                                                 const CriticalVanishingOptions& opts = {});

// iota_X f, extended by zero when the multivector degree exceeds the form
// degree (used by brackets of low-degree Hamiltonian forms).
FormField interior_or_zero_field(const VecField& X, const FormField& f);

}  // namespace plectic

#endif

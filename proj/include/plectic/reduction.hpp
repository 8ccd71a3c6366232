#ifndef PLECTIC_REDUCTION_HPP
#define PLECTIC_REDUCTION_HPP

#include <functional>
#include <random>

#include "plectic/actions.hpp"

namespace plectic {

// An explicitly presented reduction: the level set N of mu = phi with its
// embedding into M, the quotient submersion onto B, two independent sections,
// and the fundamental fields written in level-chart coordinates. Quotients are
// presented by the scenario and verified here, never constructed.
struct ReductionPresentation {
  PlecticManifold ambient;
  GroupActionSpec action;
  MomentMapForm moment;
  std::vector<FormField> phi;  // closed level form, per algebra basis element
  ChartPtr level_chart;
  ChartMap embed;                      // i : N -> M
  std::vector<VecField> level_fields;  // fundamental fields on N coordinates
  ChartPtr base_chart;
  ChartMap quotient;  // pi : N -> B
  ChartMap section;   // s : B -> N, pi o s = id
  ChartMap section2;  // an independent second section for well-definedness tests
};

struct BasicReport {
  double phi_closed_defect = 0.0;
  double level_identity_defect = 0.0;   // |i*mu - i*phi|
  double field_restriction_defect = 0.0;  // level_fields vs ambient fields through di
  double submersion_min_sv = 0.0;       // of d pi
  double fiber_defect = 0.0;            // d pi applied to level fields
  double section_defect = 0.0;          // pi o section vs id
  double horizontality_defect = 0.0;    // iota_xi i*omega
  double invariance_defect = 0.0;       // L_xi i*omega
  std::string violated_hypothesis;      // empty when all pass
  bool ok() const { return violated_hypothesis.empty(); }
};

BasicReport check_basic(const ReductionPresentation& P, int samples, double tol);

// Horizontal descent of a basic form given on N: evaluates on minimum-norm
// lifts of base coordinate tuples at section(b), and again on a randomized
// second lift; the discrepancy measures lift independence.
struct DescentValue {
  AlternatingForm value;
  double lift_discrepancy = 0.0;
};

DescentValue descend_at(const ReductionPresentation& P, const FormField& form_on_N, const Vec& b,
                        std::mt19937_64& rng);

struct ReducedFormReport {
  double descent_residual = 0.0;  // max lift discrepancy over base samples
  double closed_residual = 0.0;   // d(i*omega) on N, certifies d omega_phi = 0
  double section_consistency = 0.0;  // descent from the two sections
  bool ok = false;
};

ReducedFormReport reduced_form_report(const ReductionPresentation& P, double tol,
                                      int base_samples, std::uint64_t seed);

enum class ReduceDynamicsMode { invariant_tangent, commuting };

struct ReduceDynamicsReport {
  double precondition_defect = 0.0;  // invariance/tangency or bracket vanishing
  double tangency_defect = 0.0;
  double welldef_defect = 0.0;   // descent from the two sections
  double identity_defect = 0.0;  // iota_{Xbar} omega_phi - dbar alpha
  std::string failure;
  bool ok() const { return failure.empty(); }
};

ReduceDynamicsReport reduce_dynamics(const ReductionPresentation& P, const HamiltonianForm& a,
                                     ReduceDynamicsMode mode, double tol, int base_samples = 40,
                                     std::uint64_t seed = 9001);

// A declared cycle on the base chart: a coordinate subproduct with fixed
// values for the remaining coordinates and an orientation sign.
struct CycleSpec {
  std::vector<int> axes;  // strictly increasing base-chart axes
  Vec fixed;              // full-dimension point supplying the held coordinates
  double orientation = 1.0;
  int gauss_nodes = 48;
  int trap_nodes = 48;
};

// Integrates a pointwise form (degree = axes count) over the cycle.
double integrate_cycle(const ChartPtr& base, const CycleSpec& cycle,
                       const std::function<AlternatingForm(const Vec&)>& form_at);

struct ConnectionReport {
  ConjugacyVerdict conjugacy = ConjugacyVerdict::not_conjugate;
  double averaging_defect = 0.0;      // |sigma_avg - sigma| when maps are available
  double normalization_defect = 0.0;  // alpha(xi) + xi
  double factorization_defect = 0.0;  // iota_lambda omega - alpha_lambda ^ eta on the level set
  double basic_defect = 0.0;          // curvature contracted with level fields
  std::vector<double> chern_pairings;  // (1/2pi) * integral of F over declared 2-cycles
  // Curvature evaluated on the base through descent.
  std::function<AlternatingForm(const Vec&)> curvature_at;
  // t-valued connection components on N.
  std::vector<FormField> connection_on_level;
};

ConnectionReport connection_and_curvature(const ReductionPresentation& P, const FormField& sigma,
                                          const FormField& eta,
                                          const std::vector<VecField>& tstar_fields, double tol,
                                          const std::vector<CycleSpec>& chern_cycles,
                                          int samples = 60, std::uint64_t seed = 4711);

struct DescendEtaReport {
  double horizontal_defect = 0.0;  // iota of level fields into i*eta
  double closed_defect = 0.0;      // d(i*eta) on N
  double descent_residual = 0.0;
  std::function<AlternatingForm(const Vec&)> eta_at;  // on the base
  bool ok = false;
};

DescendEtaReport descend_eta(const ReductionPresentation& P, const FormField& eta, double tol,
                             int base_samples = 40, std::uint64_t seed = 31415);

// A lambda-parameterized family of presentations sharing the base chart.
struct PresentationFamily {
  std::function<ReductionPresentation(double)> at;
  VecField transverse;  // trivialization field per unit lambda, on the ambient chart
  FormField eta;        // ambient auxiliary form
  std::vector<VecField> tstar_fields;
  FormField sigma;
  CycleSpec top_cycle;    // (k+1)-cycle, usually all of B
  CycleSpec chern_cycle;  // 2-subcycle
  CycleSpec eta_cycle;    // (k-1)-subcycle
  std::vector<double> lambda_grid;
};

struct VariationReport {
  std::vector<double> lambda_grid;
  std::vector<double> p_values;  // integral of omega_lambda over the top cycle
  double slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;       // max deviation from the linear fit
  double predicted_slope = 0.0;    // integral of F ^ eta_phi over the top cycle
  double chern_pairing = 0.0;
  double eta_integral = 0.0;
  double lemma_variation_defect = 0.0;  // |pi* d_lambda omega_lambda - d i* iota_psi omega|
  double relative_gap = 0.0;
  std::string failure;
  bool ok() const { return failure.empty(); }
};

VariationReport variation_slope(const PresentationFamily& family, double tol,
                                std::uint64_t seed = 2718);

// Numeric pullback of a fiber tensor through a Jacobian.
AlternatingForm pullback_point(const std::vector<Vec>& jacobian, const AlternatingForm& a,
                               int source_dim);

}  // namespace plectic

#endif

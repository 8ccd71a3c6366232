#ifndef PLECTIC_QUADRATURE_HPP
#define PLECTIC_QUADRATURE_HPP

#include <complex>
#include <functional>

#include "plectic/actions.hpp"

namespace plectic {

// Per-coordinate product rule: Gauss-Legendre on linear intervals, uniform
// trapezoid on periodic ones (spectrally accurate for smooth periodic
// integrands).
struct AxisRule {
  bool gauss = true;
  int n = 48;
};

struct MonteCarloRule {
  long nodes = 0;
  std::uint64_t seed = 0;
};

struct QuadratureGrid {
  std::vector<AxisRule> axes;
  // Optional fallback: uniform Monte Carlo over the chart box instead of the
  // product rule (for integrands too rough for the shipped grids).
  std::optional<MonteCarloRule> monte_carlo;
  static QuadratureGrid for_chart(const Chart& chart, int gauss_n = 48, int trap_n = 32);
  long node_count() const;
};

void gauss_legendre(int n, Vec& nodes, Vec& weights);  // on [-1, 1]
void axis_nodes(const Coord& coord, const AxisRule& rule, Vec& nodes, Vec& weights);

// Deterministic pairwise-tree sum; result is independent of evaluation
// chunking and thread count.
double pairwise_sum(std::vector<double>& v);

// Product-rule integral of a pointwise integrand over the chart box, against
// the chart's coordinate orientation. Node evaluation may run in parallel;
// the reduction is a fixed pairwise tree.
double integrate_fn(const Chart& chart, const QuadratureGrid& grid,
                    const std::function<double(const Vec&)>& f, bool parallel = true);

// Integral of a top-degree form field.
double integrate(const FormField& top, const QuadratureGrid& grid);

// Top-degree coefficient of e^sigma ^ eta (the localization measure).
Expr measure_top_coefficient(const PlecticManifold& M, const FormField& sigma,
                             const FormField& eta);

struct FixedComponentData {
  std::string label;
  double nu_value = 0.0;         // of nu_xi per unit generator
  std::vector<double> weights;   // signed transverse rotation weights
  double measure_integral = 0.0; // integral of the e^sigma eta measure over F
};

struct LocalizationScenario {
  std::string base_name;
  PlecticManifold M;
  GroupActionSpec action;
  SplitMoment split;  // basic flavor
  FormField sigma;
  double group_volume = 2 * M_PI;  // circle length at unit metric
  double delta = 1.0;              // level-set tube radius
  std::vector<FixedComponentData> components;
  QuadratureGrid grid;
};

struct StationaryPhaseRow {
  double t = 0.0;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double rel_gap = 0.0;
};

struct StationaryPhaseReport {
  std::vector<StationaryPhaseRow> rows;
  double max_rel_gap = 0.0;
  std::string failure;
  bool ok() const { return failure.empty(); }
};

// Oscillatory integral of the moment phase against the e^sigma eta measure;
// the fixed-component sum uses e_F(tau) = prod_j (i w_j tau) / (2 pi).
StationaryPhaseReport stationary_phase_compare(const LocalizationScenario& L,
                                               const std::vector<double>& t_values,
                                               const QuadratureGrid& grid);

struct GaussianCheckReport {
  double part_i_lhs = 0.0, part_i_rhs = 0.0, part_i_gap = 0.0;
  double part_ii_lhs = 0.0, part_ii_rhs = 0.0, part_ii_gap = 0.0;
  int nodes_used = 0;
  double max_gap() const { return std::max(part_i_gap, part_ii_gap); }
};

// Both Euclidean Gaussian identities by adaptive product quadrature over a
// box of half-width max(8 sqrt(t), 4t|y| + 8 sqrt(t)).
GaussianCheckReport gaussian_check(int ell, double t, const Vec& y, double rel_tol = 1e-10);

double heat_kernel_I(const LocalizationScenario& L, double t, const QuadratureGrid& grid);

struct ReducedSpaceData {
  ChartPtr base;
  FormField sigma0;
  FormField eta0;
  // Metric square of the curvature on the base; null means F = 0.
  std::function<double(const Vec&)> curvature_sq;
  QuadratureGrid grid;
};

struct LocalizationReport {
  std::vector<double> t_grid;
  std::vector<double> I_values;
  std::vector<double> rhs_values;  // |G| * integral of e^{sigma0 + t|F|^2} eta0
  std::vector<double> D_values;
  double fitted_slope = 0.0;   // of log|D| against 1/t
  double slope_bound = 0.0;    // -delta^2/4 * (1 - fit_tol)
  bool decay_ok = false;
  double spot_t = 0.0;
  double lemma_gap = 0.0;  // double-integral route vs I(t) at spot_t
  std::string failure;
  bool ok() const { return failure.empty(); }
};

LocalizationReport localization_compare(const LocalizationScenario& L,
                                        const ReducedSpaceData& reduced,
                                        const std::vector<double>& t_grid,
                                        const QuadratureGrid& grid, double fit_tol = 0.05,
                                        double spot_t = 0.1);

}  // namespace plectic

#endif

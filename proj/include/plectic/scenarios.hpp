#ifndef PLECTIC_SCENARIOS_HPP
#define PLECTIC_SCENARIOS_HPP

#include "plectic/quadrature.hpp"
#include "plectic/reduction.hpp"

namespace plectic {

struct ScenarioParams {
  double lambda = 1.0;          // reduction level (hopf_c2, product diagonal)
  int ell = 2;                  // power_sigma_ell exponent
  int torus_rank = 2;           // power_sigma_ell: 1 or 2
  int m = 2;                    // multimomentum_trivial base dimension
  int k = 2;                    // multimomentum_trivial form degree
  std::string mode = "single";  // product_spheres_torus: single | diagonal
  std::string su2_action = "left";  // su2_cartan: left | right | adjoint
  bool with_circle = true;      // s2_x_torus: false gives the plain sphere
  bool corrupt_phi = false;     // negative control: non-closed level form
};

// Chart data adapted to one fixed component, for the locator and the
// stationary-phase sum.
struct FixedComponentChart {
  std::string label;
  PlecticManifold M;
  GroupActionSpec action;
  FormField sigma;
  std::vector<Expr> nu;
  std::vector<double> expected_weights;
  double expected_nu = 0.0;
};

struct Scenario {
  std::string name;
  std::string description;
  ScenarioParams params;
  PlecticManifold M;
  GroupActionSpec action;
  MomentMapForm mu;
  std::optional<SplitMoment> split;
  std::optional<FormField> sigma;
  std::vector<FixedComponentChart> component_charts;
  std::optional<LocalizationScenario> localization;
  std::optional<ReductionPresentation> presentation;
  std::vector<VecField> tstar_fields;
  std::vector<CycleSpec> chern_cycles;
  std::optional<PresentationFamily> family;
  std::optional<ReducedSpaceData> reduced_data;
  // su2 only: the Weyl comparison 1-form and the torus axis.
  std::optional<FormField> weyl_form;
};

Scenario build_scenario(const std::string& name, const ScenarioParams& params = {});

std::vector<std::pair<std::string, std::string>> scenario_catalog();  // name -> description

}  // namespace plectic

#endif

#ifndef PLECTIC_CHART_HPP
#define PLECTIC_CHART_HPP

#include <memory>
#include <string>
#include <vector>

#include "plectic/alternating.hpp"
#include "plectic/expr.hpp"

namespace plectic {

using Vec = std::vector<double>;

struct Coord {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
  double period() const { return hi - lo; }
};

// Local model of a manifold piece: a coordinate box, each direction linear or
// periodic. Periodic directions integrate over exactly one period.
struct Chart {
  std::string name;
  std::vector<Coord> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  Vec wrap(Vec x) const;
  bool contains(const Vec& x, double margin = 0.0) const;
  // Deterministic quasi-random interior points (Halton), shrunk away from the
  // box walls by `margin` (fraction of each extent).
  std::vector<Vec> samples(int count, double margin = 0.05) const;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<Coord> coords);

struct ChartMap {
  ChartPtr source;
  ChartPtr target;
  std::vector<Expr> components;  // one per target coordinate

  Vec eval(const Vec& x) const;
  // Jacobian d(components_i)/d(x_j), evaluated.
  std::vector<Vec> jacobian(const Vec& x) const;
  Expr jacobian_entry(int i, int j) const { return components[static_cast<std::size_t>(i)].diff(j); }
};

ChartMap compose(const ChartMap& outer, const ChartMap& inner);  // outer after inner

// Smallest |det| of the Jacobian over sample points of the source chart;
// transition maps between charts must keep this away from zero on declared
// overlaps.
double transition_min_jacobian(const ChartMap& m, const std::vector<Vec>& samples);

// Chart-resident fields with closed-form coefficients.
struct FormField {
  ChartPtr chart;
  AltFormT<Expr> f;

  int degree() const { return f.degree; }
};

struct VecField {
  ChartPtr chart;
  MultiVecT<Expr> v;

  int degree() const { return v.degree; }
};

FormField make_form(ChartPtr chart, int degree);
VecField make_vecfield(ChartPtr chart, int degree);

// Coefficient access by axis list, e.g. coeff(f, {0,2}).
Expr& coeff(FormField& f, std::initializer_list<int> axes);
Expr& coeff(VecField& v, std::initializer_list<int> axes);

AlternatingForm eval_form(const FormField& f, const Vec& x);
MultiVector eval_field(const VecField& v, const Vec& x);

FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator*(const Expr& s, const FormField& a);
VecField operator+(const VecField& a, const VecField& b);
VecField operator-(const VecField& a, const VecField& b);
VecField operator*(const Expr& s, const VecField& a);

FormField wedge(const FormField& a, const FormField& b);
VecField wedge(const VecField& a, const VecField& b);
FormField exterior_derivative(const FormField& f);
FormField interior_product(const VecField& X, const FormField& f);
FormField pullback(const ChartMap& m, const FormField& f);

// L_X = d iota_X - (-1)^{deg X} iota_X d.
FormField lie_derivative(const VecField& X, const FormField& f);

// Schouten bracket; reduces to the Lie bracket on two degree-1 fields.
VecField schouten_bracket(const VecField& X, const VecField& Y);

Expr det_expr(const std::vector<std::vector<Expr>>& m);

// Max |coefficient| of f over the sample points (coefficients evaluated).
double sampled_max(const FormField& f, const std::vector<Vec>& pts);
double sampled_max(const VecField& f, const std::vector<Vec>& pts);

// Zero-degree helper: the scalar field as a degree-0 form.
FormField scalar_field(ChartPtr chart, const Expr& e);

}  // namespace plectic

#endif

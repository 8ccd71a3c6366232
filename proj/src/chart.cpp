#include "plectic/chart.hpp"

#include <cmath>
#include <stdexcept>

namespace plectic {

namespace {
constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}
}  // namespace

Vec Chart::wrap(Vec x) const {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Coord& c = coords[i];
    if (c.periodic) {
      double p = c.period();
      x[i] = c.lo + std::fmod(std::fmod(x[i] - c.lo, p) + p, p);
    }
  }
  return x;
}

bool Chart::contains(const Vec& x, double margin) const {
  if (x.size() != coords.size()) return false;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Coord& c = coords[i];
    if (c.periodic) continue;
    double m = margin * c.period();
    if (x[i] < c.lo + m || x[i] > c.hi - m) return false;
  }
  return true;
}

std::vector<Vec> Chart::samples(int count, double margin) const {
  if (dim() > 8) throw std::invalid_argument("Chart::samples: dimension too large");
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec x(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Coord& c = coords[i];
      double u = halton(k + 1, kHaltonPrimes[i]);
      x[i] = c.lo + (margin + (1.0 - 2.0 * margin) * u) * c.period();
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

ChartPtr make_chart(std::string name, std::vector<Coord> coords) {
  auto c = std::make_shared<Chart>();
  c->name = std::move(name);
  c->coords = std::move(coords);
  return c;
}

Vec ChartMap::eval(const Vec& x) const {
  Vec y(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) y[i] = components[i].eval(x);
  return y;
}

std::vector<Vec> ChartMap::jacobian(const Vec& x) const {
  const int rows = static_cast<int>(components.size());
  const int cols = source->dim();
  std::vector<Vec> J(static_cast<std::size_t>(rows), Vec(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          components[static_cast<std::size_t>(i)].diff(j).eval(x);
  return J;
}

ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
  if (outer.source != inner.target)
    throw std::invalid_argument("compose: chart mismatch");
  ChartMap m;
  m.source = inner.source;
  m.target = outer.target;
  for (const Expr& c : outer.components) m.components.push_back(c.subst(inner.components));
  return m;
}

double transition_min_jacobian(const ChartMap& m, const std::vector<Vec>& samples) {
  if (m.source->dim() != m.target->dim())
    throw std::invalid_argument("transition_min_jacobian: charts of equal dimension required");
  const int n = m.source->dim();
  std::vector<std::vector<Expr>> jac(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.jacobian_entry(i, j);
  Expr det = det_expr(jac);
  double lo = 1e300;
  for (const Vec& x : samples) lo = std::min(lo, std::abs(det.eval(x)));
  return lo;
}

FormField make_form(ChartPtr chart, int degree) {
  FormField f;
  f.f = AltFormT<Expr>(chart->dim(), degree);
  f.chart = std::move(chart);
  return f;
}

VecField make_vecfield(ChartPtr chart, int degree) {
  VecField v;
  v.v = MultiVecT<Expr>(chart->dim(), degree);
  v.chart = std::move(chart);
  return v;
}

Expr& coeff(FormField& f, std::initializer_list<int> axes) { return f.f.at(mask_of(axes)); }
Expr& coeff(VecField& v, std::initializer_list<int> axes) { return v.v.at(mask_of(axes)); }

AlternatingForm eval_form(const FormField& f, const Vec& x) {
  Vec w = f.chart->wrap(x);
  AlternatingForm out(f.f.dim, f.f.degree);
  for (std::size_t i = 0; i < f.f.c.size(); ++i) out.c[i] = f.f.c[i].eval(w);
  return out;
}

MultiVector eval_field(const VecField& v, const Vec& x) {
  Vec w = v.chart->wrap(x);
  MultiVector out(v.v.dim, v.v.degree);
  for (std::size_t i = 0; i < v.v.c.size(); ++i) out.c[i] = v.v.c[i].eval(w);
  return out;
}

FormField operator+(const FormField& a, const FormField& b) {
  FormField r;
  r.chart = a.chart;
  static_cast<AltCoeffs<Expr>&>(r.f) = add_coeffs(a.f, b.f);
  return r;
}

FormField operator-(const FormField& a, const FormField& b) {
  return a + Expr(-1.0) * b;
}

FormField operator*(const Expr& s, const FormField& a) {
  FormField r = a;
  for (auto& c : r.f.c) c = s * c;
  return r;
}

VecField operator+(const VecField& a, const VecField& b) {
  VecField r;
  r.chart = a.chart;
  static_cast<AltCoeffs<Expr>&>(r.v) = add_coeffs(a.v, b.v);
  return r;
}

VecField operator-(const VecField& a, const VecField& b) { return a + Expr(-1.0) * b; }

VecField operator*(const Expr& s, const VecField& a) {
  VecField r = a;
  for (auto& c : r.v.c) c = s * c;
  return r;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.chart != b.chart) throw std::invalid_argument("wedge: fields on different charts");
  FormField r;
  r.chart = a.chart;
  r.f = wedge<Expr>(a.f, b.f);
  return r;
}

VecField wedge(const VecField& a, const VecField& b) {
  if (a.chart != b.chart) throw std::invalid_argument("wedge: fields on different charts");
  VecField r;
  r.chart = a.chart;
  r.v = wedge<Expr>(a.v, b.v);
  return r;
}

FormField exterior_derivative(const FormField& f) {
  const int n = f.f.dim;
  FormField r = make_form(f.chart, f.f.degree + 1);
  if (!r.f.stored() || !f.f.stored()) return r;
  const auto masks = mask_basis(n, f.f.degree);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    for (int j = 0; j < n; ++j) {
      if (masks[i] & (Mask{1} << j)) continue;
      Expr dj = f.f.c[i].diff(j);
      if (dj.is_zero()) continue;
      Mask target = masks[i] | (Mask{1} << j);
      int s = lead_sign(target, j);
      r.f.at(target) = r.f.at(target) + (s < 0 ? -dj : dj);
    }
  }
  return r;
}

namespace {

FormField interior_or_zero(const VecField& X, const FormField& f) {
  if (X.v.degree > f.f.degree) return make_form(f.chart, f.f.degree - X.v.degree);
  FormField r;
  r.chart = f.chart;
  r.f = interior_product<Expr>(X.v, f.f);
  return r;
}

}  // namespace

FormField interior_product(const VecField& X, const FormField& f) {
  if (X.chart != f.chart) throw std::invalid_argument("interior_product: chart mismatch");
  if (X.v.degree > f.f.degree)
    throw std::invalid_argument("interior_product: multivector degree exceeds form degree");
  return interior_or_zero(X, f);
}

FormField pullback(const ChartMap& m, const FormField& f) {
  if (f.chart != m.target) throw std::invalid_argument("pullback: field not on map target");
  const int p = f.f.degree;
  FormField r = make_form(m.source, p);
  if (!r.f.stored() || !f.f.stored()) return r;
  if (p == 0) {
    r.f.c[0] = f.f.c[0].subst(m.components);
    return r;
  }
  const auto tmasks = mask_basis(f.f.dim, p);
  const auto smasks = mask_basis(m.source->dim(), p);
  for (std::size_t i = 0; i < tmasks.size(); ++i) {
    if (f.f.c[i].is_zero()) continue;
    Expr ci = f.f.c[i].subst(m.components);
    const auto rows = mask_entries(tmasks[i]);
    for (std::size_t j = 0; j < smasks.size(); ++j) {
      const auto cols = mask_entries(smasks[j]);
      std::vector<std::vector<Expr>> sub(rows.size(), std::vector<Expr>(cols.size()));
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
          sub[a][b] = m.jacobian_entry(rows[a], cols[b]);
      Expr d = det_expr(sub);
      if (d.is_zero()) continue;
      r.f.c[j] = r.f.c[j] + ci * d;
    }
  }
  return r;
}

FormField lie_derivative(const VecField& X, const FormField& f) {
  if (X.chart != f.chart) throw std::invalid_argument("lie_derivative: chart mismatch");
  FormField t1 = exterior_derivative(interior_or_zero(X, f));
  FormField t2 = interior_or_zero(X, exterior_derivative(f));
  const int k = X.v.degree;
  return (k % 2 == 0) ? t1 - t2 : t1 + t2;
}

namespace {

// One decomposable-pair contribution to the Schouten bracket, with the scalar
// coefficients riding on the first factor of each wedge.
MultiVecT<Expr> schouten_term(int n, const Expr& f, const std::vector<int>& I,
                              const Expr& g, const std::vector<int>& J) {
  const int k = static_cast<int>(I.size());
  const int l = static_cast<int>(J.size());
  MultiVecT<Expr> acc(n, k + l - 1);
  auto hat = [&](const std::vector<int>& idx, int omit, const Expr& lead,
                 bool lead_on_first) {
    MultiVecT<Expr> h(n, static_cast<int>(idx.size()) - 1);
    Mask m = 0;
    for (int q = 0; q < static_cast<int>(idx.size()); ++q)
      if (q != omit) m |= Mask{1} << idx[static_cast<std::size_t>(q)];
    h.at(m) = (lead_on_first && omit != 0) ? lead : Expr(1.0);
    return h;
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < l; ++j) {
      // [X_i, Y_j] where X_1 carries f and Y_1 carries g.
      const int a = I[static_cast<std::size_t>(i)];
      const int b = J[static_cast<std::size_t>(j)];
      Expr fa = (i == 0) ? f : Expr(1.0);
      Expr gb = (j == 0) ? g : Expr(1.0);
      MultiVecT<Expr> br(n, 1);
      Expr c1 = fa * gb.diff(a);  // coefficient of d_b
      Expr c2 = gb * fa.diff(b);  // coefficient of d_a
      if (c1.is_zero() && c2.is_zero()) continue;
      br.at(Mask{1} << b) = br.at(Mask{1} << b) + c1;
      br.at(Mask{1} << a) = br.at(Mask{1} << a) - c2;
      MultiVecT<Expr> term = wedge<Expr>(wedge<Expr>(br, hat(I, i, f, true)), hat(J, j, g, true));
      int sign = ((i + 1) + (j + 1)) % 2 == 0 ? 1 : -1;
      for (std::size_t q = 0; q < acc.c.size(); ++q)
        acc.c[q] = acc.c[q] + (sign < 0 ? Expr(0.0) - term.c[q] : term.c[q]);
    }
  }
  return acc;
}

}  // namespace

VecField schouten_bracket(const VecField& X, const VecField& Y) {
  if (X.chart != Y.chart) throw std::invalid_argument("schouten_bracket: chart mismatch");
  if (X.v.degree < 1 || Y.v.degree < 1)
    throw std::invalid_argument("schouten_bracket: degrees must be >= 1");
  const int n = X.v.dim;
  VecField r = make_vecfield(X.chart, X.v.degree + Y.v.degree - 1);
  if (!r.v.stored()) return r;
  const auto xm = mask_basis(n, X.v.degree);
  const auto ym = mask_basis(n, Y.v.degree);
  for (std::size_t i = 0; i < xm.size(); ++i) {
    if (X.v.c[i].is_zero()) continue;
    const auto I = mask_entries(xm[i]);
    for (std::size_t j = 0; j < ym.size(); ++j) {
      if (Y.v.c[j].is_zero()) continue;
      const auto J = mask_entries(ym[j]);
      MultiVecT<Expr> t = schouten_term(n, X.v.c[i], I, Y.v.c[j], J);
      for (std::size_t q = 0; q < r.v.c.size(); ++q) r.v.c[q] = r.v.c[q] + t.c[q];
    }
  }
  return r;
}

Expr det_expr(const std::vector<std::vector<Expr>>& m) {
  const int p = static_cast<int>(m.size());
  if (p == 0) return Expr(1.0);
  if (p == 1) return m[0][0];
  if (p == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  // Laplace expansion along the first row.
  Expr det(0.0);
  for (int j = 0; j < p; ++j) {
    if (m[0][static_cast<std::size_t>(j)].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    minor.reserve(static_cast<std::size_t>(p - 1));
    for (int i = 1; i < p; ++i) {
      std::vector<Expr> row;
      row.reserve(static_cast<std::size_t>(p - 1));
      for (int jj = 0; jj < p; ++jj)
        if (jj != j) row.push_back(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)]);
      minor.push_back(std::move(row));
    }
    Expr term = m[0][static_cast<std::size_t>(j)] * det_expr(minor);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

double sampled_max(const FormField& f, const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const Vec& x : pts) {
    AlternatingForm v = eval_form(f, x);
    for (double c : v.c) m = std::max(m, std::abs(c));
  }
  return m;
}

double sampled_max(const VecField& f, const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const Vec& x : pts) {
    MultiVector v = eval_field(f, x);
    for (double c : v.c) m = std::max(m, std::abs(c));
  }
  return m;
}

FormField scalar_field(ChartPtr chart, const Expr& e) {
  FormField f = make_form(std::move(chart), 0);
  f.f.c[0] = e;
  return f;
}

}  // namespace plectic

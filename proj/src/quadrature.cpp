#include "plectic/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <thread>

namespace plectic {

QuadratureGrid QuadratureGrid::for_chart(const Chart& chart, int gauss_n, int trap_n) {
  QuadratureGrid g;
  for (const auto& c : chart.coords) g.axes.push_back({!c.periodic, c.periodic ? trap_n : gauss_n});
  return g;
}

long QuadratureGrid::node_count() const {
  long t = 1;
  for (const auto& a : axes) t *= a.n;
  return t;
}

void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

void axis_nodes(const Coord& coord, const AxisRule& rule, Vec& nodes, Vec& weights) {
  const double a = coord.lo, b = coord.hi;
  if (rule.gauss) {
    Vec xs, ws;
    gauss_legendre(rule.n, xs, ws);
    nodes.resize(static_cast<std::size_t>(rule.n));
    weights.resize(static_cast<std::size_t>(rule.n));
    for (int i = 0; i < rule.n; ++i) {
      nodes[static_cast<std::size_t>(i)] = 0.5 * (a + b) + 0.5 * (b - a) * xs[static_cast<std::size_t>(i)];
      weights[static_cast<std::size_t>(i)] = 0.5 * (b - a) * ws[static_cast<std::size_t>(i)];
    }
  } else {
    // uniform rule over one period, left endpoints
    nodes.resize(static_cast<std::size_t>(rule.n));
    weights.assign(static_cast<std::size_t>(rule.n), (b - a) / rule.n);
    for (int i = 0; i < rule.n; ++i) nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / rule.n;
  }
}

double pairwise_sum(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2) {
      v[half] = v[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return v[0];
}

double integrate_fn(const Chart& chart, const QuadratureGrid& grid,
                    const std::function<double(const Vec&)>& f, bool parallel) {
  const int n = chart.dim();
  if (grid.monte_carlo) {
    // Seeded uniform sampling of the box; deterministic for a fixed rule.
    std::mt19937_64 rng(grid.monte_carlo->seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double volume = 1.0;
    for (const auto& c : chart.coords) volume *= c.period();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(grid.monte_carlo->nodes));
    Vec x(static_cast<std::size_t>(n));
    for (long i = 0; i < grid.monte_carlo->nodes; ++i) {
      for (int j = 0; j < n; ++j) {
        const Coord& c = chart.coords[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(j)] = c.lo + u(rng) * c.period();
      }
      vals.push_back(f(x));
    }
    return volume * pairwise_sum(vals) / static_cast<double>(grid.monte_carlo->nodes);
  }
  if (static_cast<int>(grid.axes.size()) != n)
    throw std::invalid_argument("integrate_fn: grid does not match chart");
  std::vector<Vec> nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    axis_nodes(chart.coords[static_cast<std::size_t>(i)], grid.axes[static_cast<std::size_t>(i)],
               nodes[static_cast<std::size_t>(i)], weights[static_cast<std::size_t>(i)]);
  const long total = grid.node_count();

  // Fixed chunking keeps the pairwise reduction independent of thread count.
  const long chunk = 4096;
  const long nchunks = (total + chunk - 1) / chunk;
  std::vector<double> chunk_sums(static_cast<std::size_t>(nchunks), 0.0);

  auto run_chunk = [&](long ci) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(chunk));
    Vec x(static_cast<std::size_t>(n));
    for (long flat = ci * chunk; flat < std::min(total, (ci + 1) * chunk); ++flat) {
      long rem = flat;
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        long idx = rem % grid.axes[static_cast<std::size_t>(i)].n;
        rem /= grid.axes[static_cast<std::size_t>(i)].n;
        x[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx)];
        w *= weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx)];
      }
      vals.push_back(w * f(x));
    }
    chunk_sums[static_cast<std::size_t>(ci)] = pairwise_sum(vals);
  };

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!parallel || nchunks == 1 || hw == 1) {
    for (long ci = 0; ci < nchunks; ++ci) run_chunk(ci);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<long> next{0};
    for (unsigned tname = 0; tname < std::min<unsigned>(hw, 8); ++tname)
      futs.push_back(std::async(std::launch::async, [&] {
        long ci;
        while ((ci = next.fetch_add(1)) < nchunks) run_chunk(ci);
      }));
    for (auto& fu : futs) fu.get();
  }
  return pairwise_sum(chunk_sums);
}

double integrate(const FormField& top, const QuadratureGrid& grid) {
  if (top.f.degree != top.chart->dim())
    throw std::invalid_argument("integrate: form degree must equal chart dimension");
  Expr c = top.f.c[0];
  return integrate_fn(*top.chart, grid, [&](const Vec& x) { return c.eval(x); });
}

Expr measure_top_coefficient(const PlecticManifold& M, const FormField& sigma,
                             const FormField& eta) {
  const int n = M.chart->dim();
  FormField acc = make_form(M.chart, n);
  FormField power = scalar_field(M.chart, Expr(1.0));  // sigma^m / m!
  double fact = 1.0;
  for (int m = 0; 2 * m + eta.f.degree <= n; ++m) {
    if (m > 0) {
      power = wedge(power, sigma);
      fact *= m;
    }
    if (2 * m + eta.f.degree == n) acc = acc + Expr(1.0 / fact) * wedge(power, eta);
  }
  return acc.f.c[0];
}

StationaryPhaseReport stationary_phase_compare(const LocalizationScenario& L,
                                               const std::vector<double>& t_values,
                                               const QuadratureGrid& grid) {
  StationaryPhaseReport rep;
  if (L.split.flavor != SplitFlavor::basic) {
    rep.failure = "splitting is not basic";
    return rep;
  }
  if (L.components.empty()) {
    rep.failure = "no fixed components";
    return rep;
  }
  Expr measure = measure_top_coefficient(L.M, L.sigma, L.split.eta);
  Vec gen{1.0};
  Expr nu = L.split.nu.front();

  for (double t : t_values) {
    StationaryPhaseRow row;
    row.t = t;
    double re = integrate_fn(*L.M.chart, grid,
                             [&](const Vec& x) { return measure.eval(x) * std::cos(t * nu.eval(x)); });
    double im = integrate_fn(*L.M.chart, grid,
                             [&](const Vec& x) { return measure.eval(x) * std::sin(t * nu.eval(x)); });
    row.lhs = {re, im};
    std::complex<double> rhs{0.0, 0.0};
    for (const auto& F : L.components) {
      std::complex<double> euler{1.0, 0.0};
      for (double w : F.weights) euler *= std::complex<double>(0.0, w * t) / (2.0 * M_PI);
      rhs += std::exp(std::complex<double>(0.0, t * F.nu_value)) * F.measure_integral / euler;
    }
    row.rhs = rhs;
    row.rel_gap = std::abs(row.lhs - row.rhs) / std::max(std::abs(row.rhs), 1e-30);
    rep.max_rel_gap = std::max(rep.max_rel_gap, row.rel_gap);
    rep.rows.push_back(row);
  }
  return rep;
}

GaussianCheckReport gaussian_check(int ell, double t, const Vec& y, double rel_tol) {
  if (t <= 0) throw std::invalid_argument("gaussian_check: t must be positive");
  GaussianCheckReport rep;
  double ynorm = 0;
  for (double v : y) ynorm += v * v;
  ynorm = std::sqrt(ynorm);
  // Box covering both integrands: e^{-t|x|^2} has width 1/sqrt(t), the
  // shifted kernel of part ii is centered at 2ty with width sqrt(t).
  const double half =
      std::max({12.0 * std::sqrt(t), 12.0 / std::sqrt(t), 4.0 * t * ynorm + 12.0 * std::sqrt(t)});

  std::vector<Coord> coords;
  for (int i = 0; i < ell; ++i) coords.push_back({"v" + std::to_string(i), -half, half, false});
  Chart box{"gauss_box", coords};

  auto dot_y = [&](const Vec& x) {
    double s = 0;
    for (int i = 0; i < ell; ++i) s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    return s;
  };
  auto norm2 = [&](const Vec& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };

  double prev_i = 0, prev_ii = 0;
  for (int n = 40; n <= 320; n *= 2) {
    QuadratureGrid g;
    for (int i = 0; i < ell; ++i) g.axes.push_back({true, n});
    double int_i = integrate_fn(box, g, [&](const Vec& x) {
      return std::exp(-t * norm2(x)) * std::cos(dot_y(x));
    });
    double int_ii = integrate_fn(box, g, [&](const Vec& x) {
      return std::exp(-norm2(x) / (4.0 * t)) * std::exp(dot_y(x));
    });
    rep.nodes_used = n;
    rep.part_i_rhs = std::pow(t / M_PI, ell / 2.0) * int_i;
    rep.part_ii_rhs = std::pow(4.0 * M_PI * t, -ell / 2.0) * int_ii;
    if (n > 40 && std::abs(rep.part_i_rhs - prev_i) <= rel_tol * std::abs(rep.part_i_rhs) &&
        std::abs(rep.part_ii_rhs - prev_ii) <= rel_tol * std::abs(rep.part_ii_rhs))
      break;
    prev_i = rep.part_i_rhs;
    prev_ii = rep.part_ii_rhs;
  }
  rep.part_i_lhs = std::exp(-ynorm * ynorm / (4.0 * t));
  rep.part_ii_lhs = std::exp(t * ynorm * ynorm);
  rep.part_i_gap = std::abs(rep.part_i_lhs - rep.part_i_rhs) / std::abs(rep.part_i_lhs);
  rep.part_ii_gap = std::abs(rep.part_ii_lhs - rep.part_ii_rhs) / std::abs(rep.part_ii_lhs);
  return rep;
}

double heat_kernel_I(const LocalizationScenario& L, double t, const QuadratureGrid& grid) {
  if (t <= 0) throw std::invalid_argument("heat_kernel_I: t must be positive");
  const int ell = L.action.algebra.dim;
  Expr measure = measure_top_coefficient(L.M, L.sigma, L.split.eta);
  Eigen::MatrixXd dual = L.action.algebra.metric.inverse();
  const auto& nu = L.split.nu;
  double norm_const = std::pow(4.0 * M_PI * t, -ell / 2.0);
  return integrate_fn(*L.M.chart, grid, [&](const Vec& x) {
    Vec nv(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) nv[static_cast<std::size_t>(i)] = nu[static_cast<std::size_t>(i)].eval(x);
    double q = 0;
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) q += nv[static_cast<std::size_t>(i)] * dual(i, j) * nv[static_cast<std::size_t>(j)];
    return norm_const * std::exp(-q / (4.0 * t)) * measure.eval(x);
  });
}

LocalizationReport localization_compare(const LocalizationScenario& L,
                                        const ReducedSpaceData& reduced,
                                        const std::vector<double>& t_grid,
                                        const QuadratureGrid& grid, double fit_tol,
                                        double spot_t) {
  LocalizationReport rep;
  if (L.action.algebra.dim != 1) {
    rep.failure = "circle group required";
    return rep;
  }
  if (!reduced.base) {
    rep.failure = "reduction presentation missing";
    return rep;
  }
  rep.t_grid = t_grid;

  PlecticManifold B0;  // wrap the base for the measure builder
  B0.chart = reduced.base;
  B0.omega = make_form(reduced.base, reduced.base->dim());
  auto reduced_integral = [&](double t) {
    // integral over the base of e^{sigma0 + t|F|^2} eta0
    const int nb = reduced.base->dim();
    FormField acc = make_form(reduced.base, nb);
    FormField power = scalar_field(reduced.base, Expr(1.0));
    double fact = 1.0;
    for (int m = 0; 2 * m + reduced.eta0.f.degree <= nb; ++m) {
      if (m > 0) {
        power = wedge(power, reduced.sigma0);
        fact *= m;
      }
      if (2 * m + reduced.eta0.f.degree == nb) acc = acc + Expr(1.0 / fact) * wedge(power, reduced.eta0);
    }
    Expr top = acc.f.c[0];
    return integrate_fn(*reduced.base, reduced.grid, [&](const Vec& b) {
      double fsq = reduced.curvature_sq ? reduced.curvature_sq(b) : 0.0;
      return std::exp(t * fsq) * top.eval(b);
    });
  };

  for (double t : t_grid) {
    double I = heat_kernel_I(L, t, grid);
    double rhs = L.group_volume * reduced_integral(t);
    rep.I_values.push_back(I);
    rep.rhs_values.push_back(rhs);
    rep.D_values.push_back(I - rhs);
  }

  // Fit log|D| against 1/t.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double D = std::abs(rep.D_values[i]);
    if (D < 1e-300) continue;
    double X = 1.0 / t_grid[i];
    double Y = std::log(D);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++m;
  }
  if (m >= 2) {
    rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    rep.failure = "differences vanish; nothing to fit";
    return rep;
  }
  rep.slope_bound = -L.delta * L.delta / 4.0 * (1.0 - fit_tol);
  rep.decay_ok = rep.fitted_slope <= rep.slope_bound;
  if (!rep.decay_ok) rep.failure = "no exponential localization";

  // Spot check of the double-integral route:
  // I(t) = (2 pi)^{-l} int_g e^{-t |xi|^2} int_M e^{sigma + i nu_xi} eta dxi.
  rep.spot_t = spot_t;
  {
    Expr measure = measure_top_coefficient(L.M, L.sigma, L.split.eta);
    Expr nu = L.split.nu.front();
    const double tauhalf = 8.0 / std::sqrt(spot_t);
    Chart tau_axis{"tau", {{"tau", -tauhalf, tauhalf, false}}};
    QuadratureGrid tg;
    tg.axes.push_back({true, 80});
    QuadratureGrid inner = grid;
    for (auto& a : inner.axes) a.n = std::max(12, a.n / 2);
    double outer = integrate_fn(tau_axis, tg, [&](const Vec& tv) {
      double tau = tv[0];
      double re = integrate_fn(*L.M.chart, inner, [&](const Vec& x) {
        return measure.eval(x) * std::cos(tau * nu.eval(x));
      }, false);
      return std::exp(-spot_t * tau * tau) * re;
    });
    double I_spot = heat_kernel_I(L, spot_t, grid);
    rep.lemma_gap = std::abs(outer / (2.0 * M_PI) - I_spot) / std::max(std::abs(I_spot), 1e-30);
  }
  return rep;
}

}  // namespace plectic

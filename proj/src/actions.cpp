#include "plectic/actions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>

namespace plectic {

Vec LieAlgebraSpec::bracket(const Vec& xi, const Vec& zeta) const {
  Vec out(static_cast<std::size_t>(dim), 0.0);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        out[static_cast<std::size_t>(k)] += c(k, i, j) * xi[static_cast<std::size_t>(i)] * zeta[static_cast<std::size_t>(j)];
  return out;
}

bool LieAlgebraSpec::abelian() const {
  for (double v : structure)
    if (v != 0.0) return false;
  return true;
}

double LieAlgebraSpec::antisymmetry_defect() const {
  double m = 0;
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m = std::max(m, std::abs(c(k, i, j) + c(k, j, i)));
  return m;
}

double LieAlgebraSpec::jacobi_defect() const {
  double m = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l)
        for (int q = 0; q < dim; ++q) {
          double s = 0;
          for (int r = 0; r < dim; ++r)
            s += c(r, i, j) * c(q, r, l) + c(r, j, l) * c(q, r, i) + c(r, l, i) * c(q, r, j);
          m = std::max(m, std::abs(s));
        }
  return m;
}

double LieAlgebraSpec::metric_invariance_defect() const {
  // <[x,y],z> + <y,[x,z]> on basis triples
  double m = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) {
        double s = 0;
        for (int r = 0; r < dim; ++r)
          s += c(r, i, j) * metric(r, l) + c(r, i, l) * metric(j, r);
        m = std::max(m, std::abs(s));
      }
  return m;
}

LieAlgebraSpec abelian_algebra(int dim, std::string name) {
  LieAlgebraSpec a;
  a.dim = dim;
  a.structure.assign(static_cast<std::size_t>(dim * dim * dim), 0.0);
  a.metric = Eigen::MatrixXd::Identity(dim, dim);
  a.name = std::move(name);
  return a;
}

LieAlgebraSpec su2_algebra() {
  LieAlgebraSpec a;
  a.dim = 3;
  a.structure.assign(27, 0.0);
  auto set = [&](int k, int i, int j, double v) {
    a.structure[static_cast<std::size_t>((k * 3 + i) * 3 + j)] = v;
  };
  // [e_i, e_j] = eps_{ijk} e_k
  set(2, 0, 1, 1), set(2, 1, 0, -1);
  set(0, 1, 2, 1), set(0, 2, 1, -1);
  set(1, 2, 0, 1), set(1, 0, 2, -1);
  a.metric = Eigen::MatrixXd::Identity(3, 3);
  a.name = "su2";
  return a;
}

VecField fundamental_field(const GroupActionSpec& A, const Vec& xi) {
  if (static_cast<int>(xi.size()) != A.algebra.dim)
    throw std::invalid_argument("fundamental_field: algebra dimension mismatch");
  VecField out = make_vecfield(A.fundamental_fields.front().chart, 1);
  for (int i = 0; i < A.algebra.dim; ++i)
    out = out + Expr(xi[static_cast<std::size_t>(i)]) * A.fundamental_fields[static_cast<std::size_t>(i)];
  return out;
}

ActionLawsReport action_laws_report(const PlecticManifold& M, const GroupActionSpec& A,
                                    const std::vector<Vec>& samples) {
  ActionLawsReport rep;
  const int l = A.algebra.dim;
  for (int i = 0; i < l; ++i) {
    rep.invariance_defect = std::max(
        rep.invariance_defect,
        sampled_max(lie_derivative(A.fundamental_fields[static_cast<std::size_t>(i)], M.omega), samples));
    for (int j = 0; j < l; ++j) {
      VecField lhs = schouten_bracket(A.fundamental_fields[static_cast<std::size_t>(i)],
                                      A.fundamental_fields[static_cast<std::size_t>(j)]);
      Vec ei(static_cast<std::size_t>(l), 0.0), ej(static_cast<std::size_t>(l), 0.0);
      ei[static_cast<std::size_t>(i)] = 1.0;
      ej[static_cast<std::size_t>(j)] = 1.0;
      VecField rhs = fundamental_field(A, A.algebra.bracket(ei, ej));
      rep.homomorphism_defect = std::max(rep.homomorphism_defect, sampled_max(lhs - rhs, samples));
    }
  }
  return rep;
}

FormField MomentMapForm::component(const Vec& xi) const {
  FormField out = make_form(components.front().chart, components.front().f.degree);
  for (std::size_t i = 0; i < components.size(); ++i)
    out = out + Expr(xi[i]) * components[i];
  return out;
}

double MomentCheckReport::max_defect() const {
  double m = std::max(comoment_defect, std::max(leibniz_defect, sign_characterization_defect));
  if (finite_equivariance_defect) m = std::max(m, *finite_equivariance_defect);
  return m;
}

MomentCheckReport moment_check(const PlecticManifold& M, const GroupActionSpec& A,
                               const MomentMapForm& mu, const std::vector<Vec>& samples,
                               std::uint64_t seed) {
  MomentCheckReport rep;
  const int l = A.algebra.dim;
  const int k = M.k;

  for (int i = 0; i < l; ++i) {
    const FormField& mi = mu.components[static_cast<std::size_t>(i)];
    const VecField& fi = A.fundamental_fields[static_cast<std::size_t>(i)];
    // (a) d mu_xi = iota_xi omega
    rep.comoment_defect = std::max(
        rep.comoment_defect,
        sampled_max(exterior_derivative(mi) - interior_product(fi, M.omega), samples));
    // (b) {mu_xi, mu_zeta} = mu_[xi,zeta], with X_{mu_xi} = xi underline
    for (int j = 0; j < l; ++j) {
      Vec ei(static_cast<std::size_t>(l), 0.0), ej(static_cast<std::size_t>(l), 0.0);
      ei[static_cast<std::size_t>(i)] = 1.0;
      ej[static_cast<std::size_t>(j)] = 1.0;
      FormField br = lie_derivative(fi, mu.components[static_cast<std::size_t>(j)]);
      FormField target = mu.component(A.algebra.bracket(ei, ej));
      rep.leibniz_defect = std::max(rep.leibniz_defect, sampled_max(br - target, samples));
    }
  }

  // (c) <d mu(X_1..X_k), xi> = (-1)^k omega(X_1..X_k, xi underline) on random
  // vector arguments.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1, 1);
  const int n = M.chart->dim();
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (int i = 0; i < l; ++i) {
    FormField dmu = exterior_derivative(mu.components[static_cast<std::size_t>(i)]);
    const VecField& fi = A.fundamental_fields[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < samples.size(); s += std::max<std::size_t>(1, samples.size() / 20)) {
      const Vec& x = samples[s];
      std::vector<Vec> args(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(n)));
      for (auto& v : args)
        for (auto& q : v) q = dist(rng);
      AlternatingForm dmux = eval_form(dmu, x);
      double lhs = eval_on_vectors(dmux, std::span<const Vec>(args));
      MultiVector xiv = eval_field(fi, x);
      std::vector<Vec> wargs = args;
      wargs.push_back(Vec(xiv.c.begin(), xiv.c.end()));
      AlternatingForm wx = eval_form(M.omega, x);
      double rhs = sign * eval_on_vectors(wx, std::span<const Vec>(wargs));
      rep.sign_characterization_defect =
          std::max(rep.sign_characterization_defect, std::abs(lhs - rhs));
    }
  }

  // (d) finite equivariance: pullback along the action of h of mu_{Ad_h xi}
  // agrees with mu_xi.
  if (!A.group_maps.empty()) {
    double defect = 0.0;
    for (const auto& g : A.group_maps) {
      for (int i = 0; i < l; ++i) {
        Vec adcol(static_cast<std::size_t>(l));
        for (int j = 0; j < l; ++j) adcol[static_cast<std::size_t>(j)] = g.Ad(j, i);
        FormField twisted = pullback(g.map, mu.component(adcol));
        defect = std::max(defect,
                          sampled_max(twisted - mu.components[static_cast<std::size_t>(i)], samples));
      }
    }
    rep.finite_equivariance_defect = defect;
  }
  return rep;
}

Expr SplitMoment::nu_component(const Vec& xi) const {
  Expr out(0.0);
  for (std::size_t i = 0; i < nu.size(); ++i) out = out + Expr(xi[i]) * nu[i];
  return out;
}

SplitVerifyReport verify_split(const PlecticManifold& M, const GroupActionSpec& A,
                               const MomentMapForm& mu, const SplitMoment& S,
                               const std::vector<Vec>& samples) {
  SplitVerifyReport rep;
  (void)M;
  const int l = A.algebra.dim;
  for (int i = 0; i < l; ++i) {
    FormField prod = S.nu[static_cast<std::size_t>(i)] * S.eta;
    rep.reproduce_defect = std::max(
        rep.reproduce_defect, sampled_max(prod - mu.components[static_cast<std::size_t>(i)], samples));
  }
  rep.eta_closed_defect = sampled_max(exterior_derivative(S.eta), samples);
  if (S.flavor != SplitFlavor::plain) {
    for (int i = 0; i < l; ++i)
      rep.invariance_defect = std::max(
          rep.invariance_defect,
          sampled_max(lie_derivative(A.fundamental_fields[static_cast<std::size_t>(i)], S.eta), samples));
  }
  if (S.flavor == SplitFlavor::basic) {
    for (int i = 0; i < l; ++i)
      rep.horizontal_defect = std::max(
          rep.horizontal_defect,
          sampled_max(interior_or_zero_field(A.fundamental_fields[static_cast<std::size_t>(i)], S.eta),
                      samples));
  }
  return rep;
}

LevelSetReport split_level_set(const PlecticManifold& M, const GroupActionSpec& A,
                               const SplitMoment& S, const Vec& lambda,
                               std::vector<Vec> level_points, double tol,
                               double rejection_band, int ambient_samples) {
  LevelSetReport rep;
  const int l = A.algebra.dim;
  const int n = M.chart->dim();

  auto nu_gap = [&](const Vec& x) {
    double g = 0;
    for (int i = 0; i < l; ++i)
      g = std::max(g, std::abs(S.nu[static_cast<std::size_t>(i)].eval(x) - lambda[static_cast<std::size_t>(i)]));
    return g;
  };
  auto mu_gap = [&](const Vec& x) {
    double g = 0;
    AlternatingForm etax = eval_form(S.eta, M.chart->wrap(x));
    for (int i = 0; i < l; ++i) {
      FormField mui = S.nu[static_cast<std::size_t>(i)] * S.eta;
      AlternatingForm v = eval_form(mui, x);
      AlternatingForm lam = scale_coeffs(etax, lambda[static_cast<std::size_t>(i)]);
      double dmax = 0;
      for (std::size_t q = 0; q < v.c.size(); ++q) dmax = std::max(dmax, std::abs(v.c[q] - lam.c[q]));
      g = std::max(g, dmax);
    }
    return g;
  };

  // Membership agreement sampled over the ambient chart: the two predicates
  // must agree outside a small indeterminate band around the tolerance.
  auto ambient = M.chart->samples(ambient_samples > 400 ? 400 : ambient_samples);
  for (const Vec& x : ambient) {
    bool in_nu = nu_gap(x) < tol;
    bool in_mu = mu_gap(x) < tol;
    if (in_nu != in_mu) {
      double band_gap = std::min(std::abs(nu_gap(x) - tol), std::abs(mu_gap(x) - tol));
      rep.membership_disagreement = std::max(rep.membership_disagreement, band_gap);
    }
  }

  if (level_points.empty()) {
    auto pool = M.chart->samples(ambient_samples);
    for (const Vec& x : pool)
      if (nu_gap(x) < rejection_band) level_points.push_back(x);
  }
  rep.level_point_count = static_cast<int>(level_points.size());
  if (level_points.empty()) {
    rep.vacuous = true;
    return rep;
  }

  rep.min_jacobian_rank = l;
  rep.min_eta_norm = 1e300;
  for (const Vec& x : level_points) {
    // locally free: all nonzero xi have nonvanishing fundamental field
    Eigen::MatrixXd F(n, l);
    for (int i = 0; i < l; ++i) {
      MultiVector v = eval_field(A.fundamental_fields[static_cast<std::size_t>(i)], x);
      for (int r = 0; r < n; ++r) F(r, i) = v.c[static_cast<std::size_t>(r)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> fsvd(F);
    if (fsvd.singularValues().minCoeff() <= tol) rep.locally_free = false;

    // rank of d nu
    Eigen::MatrixXd J(l, n);
    Vec xw = M.chart->wrap(x);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < n; ++j)
        J(i, j) = S.nu[static_cast<std::size_t>(i)].diff(j).eval(xw);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    int rank = 0;
    for (int q = 0; q < svd.singularValues().size(); ++q)
      if (svd.singularValues()(q) > kDefaultRankTol * svd.singularValues()(0)) ++rank;
    rep.min_jacobian_rank = std::min(rep.min_jacobian_rank, rank);

    rep.min_eta_norm = std::min(rep.min_eta_norm, frobenius(eval_form(S.eta, x)));
  }
  rep.surjective = rep.min_jacobian_rank == l;
  return rep;
}

EquivariantClosedReport equivariant_closed_check(const PlecticManifold& M,
                                                 const GroupActionSpec& A,
                                                 const FormField& sigma, const SplitMoment& S,
                                                 std::complex<double> z,
                                                 const std::vector<Vec>& samples) {
  if (S.flavor != SplitFlavor::basic)
    throw std::invalid_argument("equivariant_closed_check: basic splitting required");
  EquivariantClosedReport rep;
  const int n = M.chart->dim();
  const int l = A.algebra.dim;

  for (int b = 0; b < l; ++b) {
    const VecField& xi = A.fundamental_fields[static_cast<std::size_t>(b)];
    Vec e(static_cast<std::size_t>(l), 0.0);
    e[static_cast<std::size_t>(b)] = 1.0;
    Expr nu = S.nu_component(e);

    // Polynomial truncation of e^{z(sigma+nu)} ^ eta by degree: the terms of
    // (sigma+nu)^m/m! are binom(m,j) nu^{m-j} sigma^j / m!, degree 2j + deg eta.
    // Complex z splits each homogeneous component into real and imaginary parts.
    std::map<int, std::pair<FormField, FormField>> comp;  // degree -> (re, im)
    auto add_to = [&](int deg, const FormField& f, std::complex<double> w) {
      auto it = comp.find(deg);
      if (it == comp.end())
        it = comp.emplace(deg, std::make_pair(make_form(M.chart, deg), make_form(M.chart, deg))).first;
      it->second.first = it->second.first + Expr(w.real()) * f;
      it->second.second = it->second.second + Expr(w.imag()) * f;
    };
    int mmax = n;  // degrees above n vanish anyway
    std::complex<double> zm(1.0, 0.0);
    double fact = 1.0;
    FormField sigmaj = scalar_field(M.chart, Expr(1.0));  // sigma^j running power
    for (int m = 0; m <= mmax; ++m) {
      if (m > 0) {
        zm *= z;
        fact *= m;
      }
      // term z^m/m! * sum_j binom(m,j) nu^{m-j} sigma^j ^ eta
      FormField sj = scalar_field(M.chart, Expr(1.0));
      for (int j = 0; j <= m; ++j) {
        if (2 * j + S.eta.f.degree <= n) {
          Expr nupow(1.0);
          for (int q = 0; q < m - j; ++q) nupow = nupow * nu;
          FormField term = Expr(static_cast<double>(binom(m, j))) * (nupow * wedge(sj, S.eta));
          add_to(2 * j + S.eta.f.degree, term, zm / fact);
        }
        if (j < m) sj = wedge(sj, sigma);
      }
    }
    (void)sigmaj;

    // Defect of D = d - iota_xi on the inhomogeneous sum, grouped by degree.
    for (int q = 0; q <= n + 1; ++q) {
      FormField re_part = make_form(M.chart, q);
      FormField im_part = make_form(M.chart, q);
      auto lower = comp.find(q - 1);
      if (lower != comp.end()) {
        re_part = re_part + exterior_derivative(lower->second.first);
        im_part = im_part + exterior_derivative(lower->second.second);
      }
      auto upper = comp.find(q + 1);
      if (upper != comp.end()) {
        re_part = re_part - interior_product(xi, upper->second.first);
        im_part = im_part - interior_product(xi, upper->second.second);
      }
      if (lower == comp.end() && upper == comp.end()) continue;
      rep.exponential_defect = std::max(rep.exponential_defect, sampled_max(re_part, samples));
      rep.exponential_defect = std::max(rep.exponential_defect, sampled_max(im_part, samples));
    }

    // omega + mu: degrees k+2, k, k-2 of d_g(omega + mu_xi).
    FormField mu_xi = nu * S.eta;
    FormField dk2 = exterior_derivative(M.omega);
    FormField dk = exterior_derivative(mu_xi) - interior_product(xi, M.omega);
    FormField dkm2 = Expr(-1.0) * interior_or_zero_field(xi, mu_xi);
    rep.omega_mu_defect = std::max(rep.omega_mu_defect, sampled_max(dk2, samples));
    rep.omega_mu_defect = std::max(rep.omega_mu_defect, sampled_max(dk, samples));
    rep.omega_mu_defect = std::max(rep.omega_mu_defect, sampled_max(dkm2, samples));
  }
  return rep;
}

std::vector<FixedComponent> fixed_point_locator(const PlecticManifold& M,
                                                const GroupActionSpec& A,
                                                const FormField& sigma,
                                                const std::vector<Expr>& nu,
                                                const FixedPointOptions& opts) {
  if (!A.algebra.abelian())
    throw std::invalid_argument("fixed_point_locator: torus action required");
  const int n = M.chart->dim();
  const int l = A.algebra.dim;

  // Grid scan for points where every fundamental field vanishes.
  std::vector<int> dims(static_cast<std::size_t>(n), opts.grid_per_dim);
  long total = 1;
  for (int d : dims) total *= d;
  auto point_of = [&](long flat) {
    Vec x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      int idx = static_cast<int>(flat % dims[static_cast<std::size_t>(i)]);
      flat /= dims[static_cast<std::size_t>(i)];
      const Coord& c = M.chart->coords[static_cast<std::size_t>(i)];
      double u = c.periodic ? (idx + 0.0) / dims[static_cast<std::size_t>(i)]
                            : (dims[static_cast<std::size_t>(i)] == 1
                                   ? 0.5
                                   : idx / (dims[static_cast<std::size_t>(i)] - 1.0));
      x[static_cast<std::size_t>(i)] = c.lo + u * c.period();
    }
    return x;
  };
  auto field_norm = [&](const Vec& x) {
    double s = 0;
    for (int i = 0; i < l; ++i) {
      MultiVector v = eval_field(A.fundamental_fields[static_cast<std::size_t>(i)], x);
      for (double cv : v.c) s += cv * cv;
    }
    return std::sqrt(s);
  };

  std::vector<long> hits;
  for (long f = 0; f < total; ++f)
    if (field_norm(point_of(f)) < opts.field_tol) hits.push_back(f);

  // Flood fill over grid adjacency (periodic wrap respected); merging is
  // deterministic, lowest flat index first.
  std::map<long, int> comp_of;
  std::vector<std::vector<long>> comps;
  for (long h : hits) {
    if (comp_of.count(h)) continue;
    std::vector<long> stack{h};
    comp_of[h] = static_cast<int>(comps.size());
    std::vector<long> members;
    while (!stack.empty()) {
      long cur = stack.back();
      stack.pop_back();
      members.push_back(cur);
      // neighbors: +-1 along each axis
      long rem = cur;
      std::vector<int> idx(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % dims[static_cast<std::size_t>(i)]);
        rem /= dims[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < n; ++i) {
        for (int dd = -1; dd <= 1; dd += 2) {
          std::vector<int> nidx = idx;
          int v = nidx[static_cast<std::size_t>(i)] + dd;
          const Coord& c = M.chart->coords[static_cast<std::size_t>(i)];
          if (c.periodic) {
            v = (v + dims[static_cast<std::size_t>(i)]) % dims[static_cast<std::size_t>(i)];
          } else if (v < 0 || v >= dims[static_cast<std::size_t>(i)]) {
            continue;
          }
          nidx[static_cast<std::size_t>(i)] = v;
          long flat = 0;
          for (int q = n - 1; q >= 0; --q) flat = flat * dims[static_cast<std::size_t>(q)] + nidx[static_cast<std::size_t>(q)];
          if (std::binary_search(hits.begin(), hits.end(), flat) && !comp_of.count(flat)) {
            comp_of[flat] = comp_of[h];
            stack.push_back(flat);
          }
        }
      }
    }
    std::sort(members.begin(), members.end());
    comps.push_back(std::move(members));
  }

  // Generator: fixed irrational mix of the basis so every weight shows up.
  Vec gen(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) gen[static_cast<std::size_t>(i)] = 1.0 + i * 0.6180339887498949;
  VecField genfield = fundamental_field(A, gen);

  std::vector<FixedComponent> out;
  for (const auto& members : comps) {
    FixedComponent fc;
    double best = 1e300;
    for (long m : members) {
      Vec x = point_of(m);
      fc.points.push_back(x);
      double fn = field_norm(x);
      if (fn < best) {
        best = fn;
        fc.representative = x;
      }
    }
    // nu on the component
    fc.nu_value.assign(static_cast<std::size_t>(l), 0.0);
    for (int i = 0; i < l; ++i) {
      double lo = 1e300, hi = -1e300;
      for (const Vec& x : fc.points) {
        double v = nu[static_cast<std::size_t>(i)].eval(M.chart->wrap(x));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      fc.nu_value[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
      fc.nu_spread = std::max(fc.nu_spread, hi - lo);
    }
    // Linearize the generator field at the representative.
    Eigen::MatrixXd J(n, n);
    Vec xw = M.chart->wrap(fc.representative);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        J(i, j) = genfield.v.at(Mask{1} << i).diff(j).eval(xw);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);
    AlternatingForm sig = eval_form(sigma, fc.representative);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int q = 0; q < n; ++q) {
      if (used[static_cast<std::size_t>(q)]) continue;
      std::complex<double> ev = es.eigenvalues()(q);
      if (std::abs(ev.imag()) < opts.field_tol) continue;  // along-F or zero direction
      if (ev.imag() < 0) continue;                         // take the +i w member of the pair
      used[static_cast<std::size_t>(q)] = true;
      for (int r = q + 1; r < n; ++r)
        if (!used[static_cast<std::size_t>(r)] &&
            std::abs(es.eigenvalues()(r).imag() + ev.imag()) < 1e-9 &&
            std::abs(es.eigenvalues()(r).real() - ev.real()) < 1e-9) {
          used[static_cast<std::size_t>(r)] = true;
          break;
        }
      double wmag = ev.imag();
      // sign against sigma on the invariant plane (u, J u)
      Eigen::VectorXcd evec = es.eigenvectors().col(q);
      Vec u(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r) u[static_cast<std::size_t>(r)] = evec(r).real();
      Eigen::VectorXd ur(n);
      for (int r = 0; r < n; ++r) ur(r) = u[static_cast<std::size_t>(r)];
      Eigen::VectorXd Ju = J * ur;
      Vec ju(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r) ju[static_cast<std::size_t>(r)] = Ju(r);
      std::vector<Vec> pairv{u, ju};
      double pairing = eval_on_vectors(sig, std::span<const Vec>(pairv));
      double w = (pairing >= 0 ? 1.0 : -1.0) * wmag;
      // weights are quoted per unit generator; gen is the unit e_1 direction
      // when l = 1, otherwise the irrational mix (reported as-is).
      if (l == 1) w /= gen[0];
      fc.weights.push_back(w);
      if (std::abs(w - std::round(w)) > opts.weight_integer_tol) fc.weights_integer = false;
    }
    std::sort(fc.weights.begin(), fc.weights.end());
    out.push_back(std::move(fc));
  }
  return out;
}

}  // namespace plectic

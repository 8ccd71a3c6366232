// Independent brute-force oracles used to pin expected values. These never
// call the library's wedge/interior/bracket code paths they are checking.
#ifndef PLECTIC_TESTS_ORACLES_HPP
#define PLECTIC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "plectic/alternating.hpp"
#include "plectic/chart.hpp"

namespace oracles {

using plectic::Vec;

// Evaluate a degree-p alternating tensor (given by colex coefficients) on p
// vectors by the full permutation sum over every ordered p-tuple of axes:
//   value = sum_{axes a_1..a_p distinct} coeff(sorted) * sign * prod v_j[a_j].
template <class S>
S eval_permutation_sum(const plectic::AltCoeffs<S>& a, const std::vector<std::vector<S>>& vecs) {
  const int n = a.dim;
  const int p = a.degree;
  if (p == 0) return a.c.empty() ? S{} : a.c[0];
  std::vector<int> axes(static_cast<std::size_t>(p), 0);
  S total{};
  while (true) {
    bool distinct = true;
    for (int i = 0; i < p && distinct; ++i)
      for (int j = i + 1; j < p; ++j)
        if (axes[static_cast<std::size_t>(i)] == axes[static_cast<std::size_t>(j)]) {
          distinct = false;
          break;
        }
    if (distinct) {
      std::vector<int> sorted = axes;
      std::sort(sorted.begin(), sorted.end());
      int inv = 0;
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
          if (axes[static_cast<std::size_t>(i)] > axes[static_cast<std::size_t>(j)]) ++inv;
      plectic::Mask m = 0;
      for (int e : sorted) m |= plectic::Mask{1} << e;
      S term = a.c[static_cast<std::size_t>(plectic::colex_rank(m))];
      for (int j = 0; j < p; ++j) term = term * vecs[static_cast<std::size_t>(j)][static_cast<std::size_t>(axes[static_cast<std::size_t>(j)])];
      if (inv & 1) term = S{} - term;
      total = total + term;
    }
    int k = p - 1;
    while (k >= 0 && axes[static_cast<std::size_t>(k)] == n - 1) {
      axes[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++axes[static_cast<std::size_t>(k)];
  }
  return total;
}

// Wedge via the shuffle sum on evaluations:
//   (a ^ b)(v_1..v_{p+q}) = sum over (p,q)-shuffles sign * a(...) b(...).
// Coefficients are recovered by evaluating on basis vectors.
template <class S>
plectic::AltFormT<S> wedge_by_shuffles(const plectic::AltFormT<S>& a, const plectic::AltFormT<S>& b) {
  const int n = a.dim;
  const int p = a.degree, q = b.degree;
  plectic::AltFormT<S> r(n, p + q);
  if (p + q > n) return r;
  auto basis_vec = [&](int i) {
    std::vector<S> v(static_cast<std::size_t>(n), S{});
    v[static_cast<std::size_t>(i)] = S{} + S(1);
    return v;
  };
  const auto masks = plectic::mask_basis(n, p + q);
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    const auto axes = plectic::mask_entries(masks[mi]);
    std::vector<std::vector<S>> vecs;
    for (int e : axes) vecs.push_back(basis_vec(e));
    // all p-subsets of positions [0, p+q)
    std::vector<int> comb(static_cast<std::size_t>(p));
    std::iota(comb.begin(), comb.end(), 0);
    S total{};
    while (true) {
      std::vector<int> rest;
      std::vector<bool> used(static_cast<std::size_t>(p + q), false);
      for (int c : comb) used[static_cast<std::size_t>(c)] = true;
      for (int i = 0; i < p + q; ++i)
        if (!used[static_cast<std::size_t>(i)]) rest.push_back(i);
      int inv = 0;  // inversions of the shuffle permutation (comb, rest)
      for (int c : comb)
        for (int r2 : rest)
          if (r2 < c) ++inv;
      std::vector<std::vector<S>> va, vb;
      for (int c : comb) va.push_back(vecs[static_cast<std::size_t>(c)]);
      for (int r2 : rest) vb.push_back(vecs[static_cast<std::size_t>(r2)]);
      S term = eval_permutation_sum(a, va) * eval_permutation_sum(b, vb);
      if (inv & 1) term = S{} - term;
      total = total + term;
      // next combination
      int k = p - 1;
      while (k >= 0 && comb[static_cast<std::size_t>(k)] == p + q - p + k) --k;
      if (k < 0) break;
      ++comb[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < p; ++j) comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    r.c[mi] = total;
  }
  return r;
}

// Interior product by completing with basis vectors: for decomposable slots,
// (iota_X a)_J = sum_I X_I a(e_{i_1},...,e_{i_l}, e_{j_1},...,e_{j_{p-l}}).
template <class S>
plectic::AltFormT<S> interior_by_completion(const plectic::MultiVecT<S>& X, const plectic::AltFormT<S>& a) {
  const int n = a.dim;
  const int l = X.degree, p = a.degree;
  plectic::AltFormT<S> r(n, p - l);
  auto basis_vec = [&](int i) {
    std::vector<S> v(static_cast<std::size_t>(n), S{});
    v[static_cast<std::size_t>(i)] = S{} + S(1);
    return v;
  };
  const auto xmasks = plectic::mask_basis(n, l);
  const auto rmasks = plectic::mask_basis(n, p - l);
  for (std::size_t rj = 0; rj < rmasks.size(); ++rj) {
    S total{};
    for (std::size_t xi = 0; xi < xmasks.size(); ++xi) {
      std::vector<std::vector<S>> vecs;
      for (int e : plectic::mask_entries(xmasks[xi])) vecs.push_back(basis_vec(e));
      for (int e : plectic::mask_entries(rmasks[rj])) vecs.push_back(basis_vec(e));
      total = total + X.c[xi] * eval_permutation_sum(a, vecs);
    }
    r.c[rj] = total;
  }
  return r;
}

// Central finite difference of a scalar function of one chart coordinate.
template <class F>
double central_diff(F&& f, Vec x, int axis, double h = 1e-5) {
  Vec xp = x, xm = x;
  xp[static_cast<std::size_t>(axis)] += h;
  xm[static_cast<std::size_t>(axis)] -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

// Classical RK4 flow of a degree-1 field.
inline Vec rk4_flow(const plectic::VecField& X, Vec x, double t, int steps = 64) {
  auto f = [&](const Vec& y) {
    plectic::MultiVector v = plectic::eval_field(X, y);
    return Vec(v.c.begin(), v.c.end());
  };
  double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    Vec k1 = f(x);
    Vec y2(x);
    for (std::size_t i = 0; i < x.size(); ++i) y2[i] = x[i] + 0.5 * h * k1[i];
    Vec k2 = f(y2);
    Vec y3(x);
    for (std::size_t i = 0; i < x.size(); ++i) y3[i] = x[i] + 0.5 * h * k2[i];
    Vec k3 = f(y3);
    Vec y4(x);
    for (std::size_t i = 0; i < x.size(); ++i) y4[i] = x[i] + h * k3[i];
    Vec k4 = f(y4);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace oracles

#endif

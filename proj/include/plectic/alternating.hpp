#ifndef PLECTIC_ALTERNATING_HPP
#define PLECTIC_ALTERNATING_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "plectic/combinatorics.hpp"

namespace plectic {

// Coefficients of a degree-p alternating tensor over an n-dimensional fiber,
// one scalar per increasing multi-index in colex order. Degrees outside [0,n]
// are legal and denote the zero tensor (empty coefficient vector).
template <class S>
struct AltCoeffs {
  int dim = 0;
  int degree = 0;
  std::vector<S> c;

  AltCoeffs() = default;
  AltCoeffs(int n, int p) : dim(n), degree(p) {
    if (p >= 0 && p <= n) c.assign(static_cast<std::size_t>(binom(n, p)), S{});
  }

  bool stored() const { return degree >= 0 && degree <= dim; }
  S& at(Mask m) { return c[static_cast<std::size_t>(colex_rank(m))]; }
  const S& at(Mask m) const { return c[static_cast<std::size_t>(colex_rank(m))]; }
};

// Covariant: houses differential-form values.
template <class S>
struct AltFormT : AltCoeffs<S> {
  using AltCoeffs<S>::AltCoeffs;
};

// Contravariant: houses multivector values.
template <class S>
struct MultiVecT : AltCoeffs<S> {
  using AltCoeffs<S>::AltCoeffs;
};

using AlternatingForm = AltFormT<double>;
using MultiVector = MultiVecT<double>;

template <class C>
C add_coeffs(const C& a, const C& b) {
  if (a.dim != b.dim || a.degree != b.degree)
    throw std::invalid_argument("add: dimension or degree mismatch");
  C r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  return r;
}

template <class C, class T>
C scale_coeffs(const C& a, const T& s) {
  C r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}

namespace detail {

template <class S>
AltCoeffs<S> wedge_impl(const AltCoeffs<S>& a, const AltCoeffs<S>& b) {
  if (a.dim != b.dim) throw std::invalid_argument("wedge: dimension mismatch");
  AltCoeffs<S> r(a.dim, a.degree + b.degree);
  if (!r.stored() || !a.stored() || !b.stored()) {
    r.c.clear();
    if (r.degree >= 0 && r.degree <= r.dim)
      r.c.assign(static_cast<std::size_t>(binom(r.dim, r.degree)), S{});
    return r;
  }
  const auto amasks = mask_basis(a.dim, a.degree);
  const auto bmasks = mask_basis(b.dim, b.degree);
  for (std::size_t i = 0; i < amasks.size(); ++i) {
    for (std::size_t j = 0; j < bmasks.size(); ++j) {
      Mask ma = amasks[i], mb = bmasks[j];
      if (ma & mb) continue;
      int s = shuffle_sign(ma, mb);
      S term = a.c[i] * b.c[j];
      if (s < 0) term = S{} - term;
      r.at(ma | mb) = r.at(ma | mb) + term;
    }
  }
  return r;
}

// Contraction by the basis multivector e_I: factors applied lowest axis first,
// each into the leading slot of the form.
template <class S>
AltCoeffs<S> contract_basis(Mask I, const AltCoeffs<S>& a) {
  AltCoeffs<S> cur = a;
  Mask rest = I;
  while (rest) {
    int axis = std::countr_zero(rest);
    rest &= rest - 1;
    AltCoeffs<S> next(cur.dim, cur.degree - 1);
    if (!next.stored()) return next;
    const auto masks = mask_basis(cur.dim, cur.degree);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      Mask k = masks[i];
      if (!(k & (Mask{1} << axis))) continue;
      int s = lead_sign(k, axis);
      S term = cur.c[i];
      if (s < 0) term = S{} - term;
      next.at(k & ~(Mask{1} << axis)) = next.at(k & ~(Mask{1} << axis)) + term;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace detail

// Exterior product with the shuffle-sign convention; degree overflow yields
// the zero tensor of the summed degree.
template <class S>
AltFormT<S> wedge(const AltFormT<S>& a, const AltFormT<S>& b) {
  AltFormT<S> r;
  static_cast<AltCoeffs<S>&>(r) = detail::wedge_impl<S>(a, b);
  return r;
}

template <class S>
MultiVecT<S> wedge(const MultiVecT<S>& a, const MultiVecT<S>& b) {
  MultiVecT<S> r;
  static_cast<AltCoeffs<S>&>(r) = detail::wedge_impl<S>(a, b);
  return r;
}

// iota_X a for a degree-l multivector X: decomposable factors enter the form's
// leading slots in wedge order, so iota_{X_1 ^ ... ^ X_l} a = a(X_1,...,X_l, -).
template <class S>
AltFormT<S> interior_product(const MultiVecT<S>& X, const AltFormT<S>& a) {
  if (X.dim != a.dim) throw std::invalid_argument("interior_product: dimension mismatch");
  if (X.degree > a.degree)
    throw std::invalid_argument("interior_product: multivector degree exceeds form degree");
  AltFormT<S> r(a.dim, a.degree - X.degree);
  if (!X.stored() || !a.stored()) return r;
  const auto xmasks = mask_basis(X.dim, X.degree);
  for (std::size_t i = 0; i < xmasks.size(); ++i) {
    AltCoeffs<S> piece = detail::contract_basis<S>(xmasks[i], a);
    for (std::size_t j = 0; j < r.c.size(); ++j) r.c[j] = r.c[j] + X.c[i] * piece.c[j];
  }
  return r;
}

// Evaluation of a degree-p form on p fiber vectors (fully antisymmetric).
template <class S>
S eval_on_vectors(const AltFormT<S>& a, std::span<const std::vector<S>> vecs) {
  if (static_cast<int>(vecs.size()) != a.degree)
    throw std::invalid_argument("eval_on_vectors: argument count != degree");
  if (!a.stored()) return S{};
  if (a.degree == 0) return a.c[0];
  const auto masks = mask_basis(a.dim, a.degree);
  const int p = a.degree;
  S total{};
  std::vector<int> rows;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    rows = mask_entries(masks[i]);
    // det of the p x p matrix (v_j)_{rows[l]} by permutation expansion.
    std::vector<int> perm(p);
    for (int q = 0; q < p; ++q) perm[q] = q;
    S det{};
    // Heap's algorithm over column permutations.
    std::vector<int> ctr(p, 0);
    int sign = 1;
    auto add_term = [&](int sgn) {
      S prod = a.c[i];  // fold coefficient into the product
      for (int l = 0; l < p; ++l) prod = prod * vecs[static_cast<std::size_t>(perm[l])][static_cast<std::size_t>(rows[l])];
      if (sgn < 0) prod = S{} - prod;
      det = det + prod;
    };
    add_term(sign);
    int q = 0;
    while (q < p) {
      if (ctr[q] < q) {
        if (q % 2 == 0)
          std::swap(perm[0], perm[q]);
        else
          std::swap(perm[ctr[q]], perm[q]);
        sign = -sign;
        add_term(sign);
        ++ctr[q];
        q = 0;
      } else {
        ctr[q] = 0;
        ++q;
      }
    }
    total = total + det;
  }
  return total;
}

}  // namespace plectic

#endif

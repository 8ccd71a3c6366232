#ifndef PLECTIC_COMBINATORICS_HPP
#define PLECTIC_COMBINATORICS_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace plectic {

// Strictly increasing multi-indices over axes [0,n) are stored as bitmasks.
// Basis order is colexicographic, which for masks of equal popcount coincides
// with increasing numeric value of the mask.
using Mask = std::uint32_t;

inline constexpr int kMaxDim = 20;

inline long binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  static const auto table = [] {
    std::vector<std::vector<long>> t(kMaxDim + 1);
    for (int i = 0; i <= kMaxDim; ++i) {
      t[i].resize(i + 1);
      t[i][0] = t[i][i] = 1;
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (n > kMaxDim) throw std::invalid_argument("binom: dimension too large");
  return table[n][k];
}

inline int mask_degree(Mask m) { return std::popcount(m); }

// Colex rank of a degree-p mask within the degree-p basis of a fixed n.
inline long colex_rank(Mask m) {
  long r = 0;
  int j = 1;
  while (m) {
    int bit = std::countr_zero(m);
    r += binom(bit, j++);
    m &= m - 1;
  }
  return r;
}

// All degree-p masks over [0,n) in colex order (Gosper's hack).
inline std::vector<Mask> mask_basis(int n, int p) {
  std::vector<Mask> out;
  if (p < 0 || p > n) return out;
  out.reserve(static_cast<std::size_t>(binom(n, p)));
  if (p == 0) {
    out.push_back(0);
    return out;
  }
  Mask m = (Mask{1} << p) - 1;
  const Mask limit = Mask{1} << n;
  while (m < limit) {
    out.push_back(m);
    Mask c = m & -m;
    Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
    if (c == 0) break;
  }
  return out;
}

inline std::vector<int> mask_entries(Mask m) {
  std::vector<int> e;
  while (m) {
    e.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return e;
}

inline Mask mask_of(std::initializer_list<int> axes) {
  Mask m = 0;
  for (int a : axes) m |= Mask{1} << a;
  return m;
}

// Sign of sorting the concatenation (A,B) of disjoint masks into colex order:
// (-1)^{#inversions}.
inline int shuffle_sign(Mask a, Mask b) {
  int inv = 0;
  Mask bb = b;
  while (bb) {
    int bit = std::countr_zero(bb);
    inv += std::popcount(a >> (bit + 1));
    bb &= bb - 1;
  }
  return (inv & 1) ? -1 : 1;
}

// Sign of extracting axis i from mask k into the leading slot.
inline int lead_sign(Mask k, int i) {
  int below = std::popcount(k & ((Mask{1} << i) - 1));
  return (below & 1) ? -1 : 1;
}

}  // namespace plectic

#endif

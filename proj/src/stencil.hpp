#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "epm/schrodinger.hpp"

namespace epm::detail {

// 4th-order central weights for offsets -2, -1, +1, +2 (centre weight is
// zero or absorbed because every sample enters as a difference from the
// centre value).
inline constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
inline constexpr std::array<double, 4> kFirst{1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
inline constexpr std::array<double, 4> kSecond{-1.0 / 12, 16.0 / 12, 16.0 / 12, -1.0 / 12};

inline size_t axis_shift(const Grid& g, size_t c, int axis, int a) {
  return axis == 0 ? g.shifted(c, a, 0) : g.shifted(c, 0, a);
}

/// d/dx_axis of a field given as differences diff(n) = f(n) - f(c).
template <class Diff>
auto first_derivative(const Grid& g, size_t c, int axis, Diff&& diff) {
  using T = decltype(diff(c));
  T s{};
  for (size_t i = 0; i < kOffsets.size(); ++i) s += kFirst[i] * diff(axis_shift(g, c, axis, kOffsets[i]));
  return s / g.axis(axis).spacing();
}

template <class Diff>
auto second_derivative(const Grid& g, size_t c, int axis, Diff&& diff) {
  using T = decltype(diff(c));
  T s{};
  for (size_t i = 0; i < kOffsets.size(); ++i) s += kSecond[i] * diff(axis_shift(g, c, axis, kOffsets[i]));
  const double h = g.axis(axis).spacing();
  return s / (h * h);
}

template <class Diff>
auto mixed_derivative(const Grid& g, size_t c, Diff&& diff) {
  using T = decltype(diff(c));
  T s{};
  for (size_t a = 0; a < kOffsets.size(); ++a)
    for (size_t b = 0; b < kOffsets.size(); ++b)
      s += (kFirst[a] * kFirst[b]) * diff(g.shifted(c, kOffsets[a], kOffsets[b]));
  return s / (g.axis(0).spacing() * g.axis(1).spacing());
}

/// All axis-aligned stencil nodes valid (and the diagonal ones too when
/// `mixed` is set on a 2D grid).
inline bool stencil_valid(const Grid& g, size_t c, const std::vector<std::uint8_t>& valid,
                          bool mixed) {
  if (!valid[c]) return false;
  for (int axis = 0; axis < g.dimension(); ++axis)
    for (int a : kOffsets)
      if (!valid[axis_shift(g, c, axis, a)]) return false;
  if (mixed && g.dimension() == 2)
    for (int a : kOffsets)
      for (int b : kOffsets)
        if (!valid[g.shifted(c, a, b)]) return false;
  return true;
}

}  // namespace epm::detail

#pragma once

// Arithmetic on the extended real line with the conventions used throughout
// the library: 0 * (+-inf) = 0, x / 0 = +inf for x > 0, x / (+-inf) = 0.

#include <algorithm>
#include <cmath>
#include <limits>

namespace subharm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0.0 ? -x : 0.0; }

/// ln+ x = max(ln x, 0) for x >= 0.
inline double ln_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

/// Product with the convention 0 * (+-inf) = 0.
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

struct ExtRatio {
  double value = 0.0;
  bool degenerate = false;  // 0/0
};

/// Ratio of nonnegative quantities. A denominator at or below `den_zero`
/// counts as zero, so that rounding noise in a quantity that is zero in
/// exact arithmetic does not produce a spurious finite ratio.
inline ExtRatio ext_ratio(double num, double den, double num_zero = 0.0,
                          double den_zero = 0.0) {
  const bool num_is_zero = std::abs(num) <= num_zero;
  const bool den_is_zero = std::abs(den) <= den_zero;
  if (den_is_zero) {
    if (num_is_zero) return {0.0, true};
    return {num > 0.0 ? kInf : -kInf, false};
  }
  if (std::isinf(den)) {
    if (std::isinf(num)) return {kInf, false};
    return {0.0, false};
  }
  if (num_is_zero) return {0.0, false};
  return {num / den, false};
}

}  // namespace subharm

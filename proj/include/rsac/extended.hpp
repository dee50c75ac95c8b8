#pragma once

#include <limits>

namespace rsac {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Product on [0, +inf] with the convention 0 * inf = 0.
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

} // namespace rsac

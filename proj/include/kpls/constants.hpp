#pragma once

#include <algorithm>
#include <cmath>

#include "kpls/errors.hpp"

namespace kpls {

inline constexpr double kDefaultDelta = 0.05;
inline constexpr double kDefaultTau2 = 1.0;

inline double g_function(double x) { return 1.0 + 2.0 * x + 2.0 * std::sqrt(x); }

inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
}

// ln(6K/δ)
inline double x_delta(int k, double delta) {
  check_delta(delta);
  if (k < 1) throw InvalidArgument("k must be at least 1");
  return std::log(6.0 * k / delta);
}

// max(g(x_δ), 2√(2x_δ))
inline double c_big_delta(int k, double delta) {
  const double x = x_delta(k, delta);
  return std::max(g_function(x), 2.0 * std::sqrt(2.0 * x));
}

inline double c_small_delta(int k, double delta) { return 16.0 * c_big_delta(k, delta); }

}  // namespace kpls

#pragma once

// Straight-line scalar re-implementations used as independent oracles.
// Deliberately written on plain doubles without the library types.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using ScalarMap = std::function<double(double)>;

inline double saturating(double x) { return x / (1.0 + std::fabs(x)); }

// Returns x_0 .. x_{steps+1}.
inline std::vector<double> multi_inertial(const ScalarMap& T, double a, double b, double g, double l, double x0,
                                          double x1, int steps) {
  std::vector<double> xs{x0, x1};
  for (int n = 1; n <= steps; ++n) {
    const double xn = xs[n], xp = xs[n - 1];
    const double y = xn + a * (xn - xp);
    const double z = xn + b * (xn - xp);
    const double u = xn + g * (xn - xp);
    xs.push_back((1 - l) * y + l / 2 * z + l / 2 * T(u));
  }
  return xs;
}

// Returns x_0 .. x_steps.
inline std::vector<double> km(const ScalarMap& T, double l, double x0, int steps) {
  std::vector<double> xs{x0};
  for (int n = 0; n < steps; ++n) xs.push_back((1 - l) * xs.back() + l * T(xs.back()));
  return xs;
}

// Returns x_0 .. x_{steps+1}.
inline std::vector<double> inertial_km(const ScalarMap& T, double l, double a, double x0, double x1, int steps) {
  std::vector<double> xs{x0, x1};
  for (int n = 1; n <= steps; ++n) {
    const double w = xs[n] + a * (xs[n] - xs[n - 1]);
    xs.push_back((1 - l) * w + l * T(w));
  }
  return xs;
}

}  // namespace oracle

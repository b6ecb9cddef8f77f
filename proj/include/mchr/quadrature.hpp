#pragma once

#include <functional>
#include <vector>

namespace mchr {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;

  /// The same settings with both tolerances divided by `factor`.
  QuadratureConfig tightened(double factor) const {
    return {abs_tol / factor, rel_tol / factor, max_subdivisions * 2};
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b].
/// b may be +inf, in which case the tail is mapped onto [0, 1) by
/// t = a + u / (1 - u). Throws NonConvergence when max_subdivisions is
/// exhausted before max(abs_tol, rel_tol * |value|) is met.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// As integrate(), split at the given points (those outside (a, b) are
/// ignored) so kinks and jumps of f sit on interval ends.
QuadratureResult integrate_piecewise(const Integrand& f, double a, double b, std::vector<double> breakpoints,
                                     const QuadratureConfig& cfg);

}  // namespace mchr

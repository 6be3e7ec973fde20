#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace hsb {

struct QuadOptions {
  double tol = 1e-10;                   // relative to the L1 norm of the integrand
  std::size_t max_evaluations = 1000000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double l1 = 0.0;  // integral of |integrand|
  std::size_t evaluations = 0;
};

/// Integrand r^power * f(r) on [0, upper]. `sing` declares the behaviour
/// f(r) ~ r^sing as r -> 0; power + sing must exceed -1.
struct RadialIntegrand {
  std::function<double(double)> f;
  double power = 0.0;
  double sing = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

/// Adaptive quadrature with geometric panels toward r = 0 and, for infinite
/// domains, toward infinity after the map u = r/(1+r). Each panel is handled
/// by an adaptive Gauss-Kronrod (7,15) rule.
/// Throws DivergenceError on a violated weight invariant or a non-finite
/// integrand value, NonConvergenceError when the evaluation budget runs out.
QuadResult integrate_radial(const RadialIntegrand& integrand, const QuadOptions& opts = {});

/// Adaptive Gauss-Kronrod on [a, b], split at the given interior breakpoints.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& breakpoints = {},
                              const QuadOptions& opts = {});

}  // namespace hsb

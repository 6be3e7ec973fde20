#pragma once

#include <vector>

#include "hsb/params.hpp"

namespace hsb {

/// Closed forms of the unit-scale bubble U1, the kernel element Z0 and their
/// radial derivatives, with t = r^(2-s).
///
///   U1(r) = kappa (1+t)^(-(n-2)/(2-s))
///   Z0(r) = (n-2) kappa / 2 * (t-1) (1+t)^(-(n-s)/(2-s))
///
/// Z0 is the scale derivative of delta^(-(n-2)/2) U1(r/delta) at delta = 1.
class Bubble {
public:
  explicit Bubble(const HSParams& p);

  const HSParams& params() const { return p_; }
  const ConstantSet& constants() const { return c_; }

  double U(double r) const;
  double dU(double r) const;
  double d2U(double r) const;
  double rdU(double r) const { return r * dU(r); }

  double Z(double r) const;
  double dZ(double r) const;
  double d2Z(double r) const;

  /// V(r) = (2*(s)-1) U1^(2*(s)-2) r^(-s), the linearised potential.
  double V(double r) const;

  /// U1^(2*(s)-1) r^(-s), the nonlinear term of the bubble equation.
  double nonlinearity(double r) const;

private:
  HSParams p_;
  ConstantSet c_;
  double k_;   // (n-2)/(2-s)
  double m_;   // (n-s)/(2-s) = k + 1
  double a_;   // (n-2) kappa / 2
};

struct ProfilePoint {
  double U;          // U_delta(r)
  double dr_U;       // radial derivative of U_delta
  double ddelta_U;   // scale derivative of U_delta, equal to Z_delta / delta
  double Z;          // Z_delta(r)
};

/// U_delta(r) = delta^(-(n-2)/2) U1(r/delta) and Z_delta(r) = delta^(-(n-2)/2) Z0(r/delta).
ProfilePoint eval_profiles(const HSParams& p, double delta, double r);

/// Nodes r_i = r_max (i/N)^gamma, i = 0..N.
struct RadialGrid {
  double r_max = 200.0;
  int N = 8000;
  double gamma = 2.0;

  std::vector<double> nodes() const;
};

/// Default grid for the given parameters: gamma = 2/(2-s).
RadialGrid default_grid(const HSParams& p);
void validate(const RadialGrid& g);

enum class DerivativeMethod { analytic, finite_difference4 };

struct PdeResidual {
  double max_rel_residual_U;
  double max_rel_residual_Z;
};

/// Maximal relative defect of -u'' - (n-1)u'/r against the bubble equation
/// (for U1) and the linearised equation (for Z0) over the interior grid nodes.
/// The defect is measured relative to the sum of the magnitudes of the terms.
PdeResidual pde_residual(const HSParams& p, const RadialGrid& grid,
                         DerivativeMethod method = DerivativeMethod::analytic);

}  // namespace hsb

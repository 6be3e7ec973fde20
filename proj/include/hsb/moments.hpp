#pragma once

#include <string>
#include <vector>

#include "hsb/params.hpp"
#include "hsb/quadrature.hpp"

namespace hsb {

/// I_p^q = int_0^inf t^q (1+t)^(-p) dt = Gamma(q+1) Gamma(p-q-1) / Gamma(p).
/// Throws DivergenceError unless q > -1 and p - q > 1.
double ipq(double p, double q);

/// The same integral by direct quadrature (cross-check only).
double ipq_quadrature(double p, double q, const QuadOptions& opts = {});

/// int_0^inf r^b (1 + r^(2-s))^(-e) dr, reduced to I_e^q / (2-s) by t = r^(2-s).
double radial_beta_integral(double b, double e, double s);

enum class MomentKind { mass2, r2mass, r2grad, r4grad, gradsq, crit, r2crit, r4crit, z0grad };

const char* moment_name(MomentKind k);
MomentKind moment_from_name(const std::string& name);
std::vector<MomentKind> all_moments();

/// Closed Beta-form value of the whole-space moment (angular factor included).
double bubble_moment(const HSParams& p, MomentKind kind);

/// The same moment by radial quadrature of the closed-form profiles.
double bubble_moment_quadrature(const HSParams& p, MomentKind kind, const QuadOptions& opts = {});

struct RatioCheck {
  std::string name;
  double quadrature;
  double closed_form;
  double abs_residual;
  double rel_residual;
};

struct IdentityReport {
  HSParams params;
  std::vector<RatioCheck> rows;
  double max_rel_residual;
};

/// The six moment-ratio identities, each evaluated from quadrature moments and
/// compared with its closed form.
IdentityReport identity_report(const HSParams& p, const QuadOptions& opts = {1e-12, 1000000});

}  // namespace hsb

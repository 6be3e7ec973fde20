#pragma once

#include <string>
#include <vector>

#include "hsb/geometry.hpp"
#include "hsb/params.hpp"

namespace hsb {

/// Radial model of a manifold near the concentration point: the truncated
/// volume density of `curvature`, the spherical average of the potential jet
/// h(r) = h0 - r^2 lap_h / (2n), and a sharp cutoff at r0.
struct RadialModel {
  CurvatureData curvature;
  PotentialJet jet;
  double r0 = 1.0;
};

/// Checks r0 > 0 and G > 0 on [0, 2 r0].
void validate(const RadialModel& m, int n);

/// J(U_delta) = omega [ 1/2 int (U'^2 + h U^2) G r^(n-1) - 1/2* int U^2* G r^(n-1-s) ]
/// over [0, r0]. Requires 0 < delta <= r0/10.
double j_at_bubble(const RadialModel& m, const HSParams& p, double delta);

struct ExpansionCoeffs {
  double c0;
  double c2;
  double c4;
};

/// Coefficients of 1, delta^2 and delta^4 in the expansion of J(U_delta).
/// c4 carries the factor int |X|^2 U1^2 that the expansion produces; see
/// LocalMoment for the alternative normalisation.
ExpansionCoeffs predicted_coeffs(const RadialModel& m, const HSParams& p);

/// The delta^4 coefficient when the same bracket multiplies int |X|^4 |grad U1|^2.
double predicted_c4_r4grad(const RadialModel& m, const HSParams& p);

struct FitReport {
  std::vector<double> deltas;
  std::vector<double> values;     // J(U_delta)
  std::vector<double> residuals;  // J minus the fitted quadratic in delta^2
  double c0_fit, c2_fit, c4_fit;
  double c0_se, c2_se, c4_se;
  double c0_pred, c2_pred, c4_pred;
  double c4_pred_r4grad;
  double c0_rel_dev, c2_rel_dev, c4_rel_dev;
  double c2_reference;  // 1/2 c_ns Scal int U1^2, the generic size of the delta^2 term
};

/// Least-squares fit of J(delta) against {1, delta^2, delta^4}. Needs at least
/// six deltas with max/min >= 2 (NumericalError otherwise).
FitReport fit_expansion(const RadialModel& m, const HSParams& p, const std::vector<double>& deltas);

/// "lo:hi:count" with geometric spacing.
std::vector<double> parse_sweep(const std::string& spec);

struct RemainderReport {
  double alpha_inv = 0.0;
  double alpha = 0.0;
  bool degenerate = false;
  double tau = 0.0;  // amplitude of the axial trace-free Ricci model
};

/// alpha^(-1) = || h0 U1 + (1/3) R_ij s^i s^j r dU1/dr ||_{2n/(n+2)}. The
/// trace-free Ricci part is modelled as T = tau (e e^T - I/n) with
/// |T|^2 = tau^2 (n-1)/n fixed by the curvature data.
RemainderReport remainder_alpha(const CurvatureData& c, const HSParams& p, double h0);

/// The same norm for the profile at scale delta, integrated in physical r.
double remainder_norm_at_scale(const CurvatureData& c, const HSParams& p, double h0, double delta);

/// ||U1||_{2n/(n+2)} from the Beta closed form.
double bubble_lp_norm_closed(const HSParams& p);

}  // namespace hsb

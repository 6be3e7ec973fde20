#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsb/geometry.hpp"
#include "hsb/params.hpp"

namespace hsb {

/// quad t^2 + quartic t^4 with quad = (1/2) f(x0) int U1^2 and quartic = L_g.
struct ReducedFunctional {
  double quad_coef = 0.0;
  double quartic_coef = 0.0;
};

enum class CriticalStatus { found, sign_condition_fails, degenerate };

const char* critical_status_name(CriticalStatus s);

struct CriticalPoint {
  CriticalStatus status = CriticalStatus::sign_condition_fails;
  std::optional<double> t0;
  double second_derivative = 0.0;  // at t0, equals -4 quad
  bool nondegenerate = false;
};

/// Positive critical point t0^2 = -quad / (2 quartic), present when quad and
/// quartic have opposite signs. A vanishing quartic is reported as degenerate.
CriticalPoint critical_t(const ReducedFunctional& rf);

/// Bubble scale delta = t0 sqrt(eps) predicted for parameter eps > 0.
double predicted_scale(double t0, double eps);

struct LadderEntry {
  int k;
  double lap_h_shift;  // -2n/k
  double shift;        // moment / (2k)
  double lg_k;
  std::optional<double> t0;
};

/// Perturbed potentials h_k = h0 + d(x,x0)^2 / k: L_g(h_k) = L_g(h0) + moment/(2k).
/// Requires f0 < 0. `moment` is the local moment that multiplies -(1/(4n)) Delta h.
std::vector<LadderEntry> family_theorem2(const LgBreakdown& base, const HSParams& p, double f0,
                                         int k_max, LocalMoment moment = LocalMoment::r4grad);

enum class Regime {
  subcritical_minimizing,
  critical_blowup_candidate,
  critical_degenerate,
  supercritical
};

const char* regime_name(Regime r);

struct Verdict {
  Regime regime;
  int lg_sign = 0;              // sign of L_g (critical regimes)
  int required_f_sign = 0;      // sign f(x0) must have for a blow-up family
  bool f_condition_met = false;
  std::string message;
};

/// Classifies (h0, Scal, L_g). Criticality and L_g = 0 are decided with the
/// relative tolerance `rel_tol`.
Verdict verdict(const PotentialJet& jet, const CurvatureData& c, const HSParams& p,
                const LgBreakdown& lg, double rel_tol = 1e-12);

}  // namespace hsb

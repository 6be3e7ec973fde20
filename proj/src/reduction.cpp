#include "hsb/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "hsb/errors.hpp"
#include "hsb/moments.hpp"

namespace hsb {

const char* critical_status_name(CriticalStatus s) {
  switch (s) {
    case CriticalStatus::found: return "found";
    case CriticalStatus::sign_condition_fails: return "sign_condition_fails";
    case CriticalStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

CriticalPoint critical_t(const ReducedFunctional& rf) {
  if (!std::isfinite(rf.quad_coef) || !std::isfinite(rf.quartic_coef))
    throw DomainError("reduced functional coefficients must be finite");
  CriticalPoint cp;
  if (rf.quartic_coef == 0.0) {
    cp.status = CriticalStatus::degenerate;
    return cp;
  }
  if (!(rf.quad_coef * rf.quartic_coef < 0.0)) {
    cp.status = CriticalStatus::sign_condition_fails;
    return cp;
  }
  const double t0 = std::sqrt(-rf.quad_coef / (2.0 * rf.quartic_coef));
  cp.status = CriticalStatus::found;
  cp.t0 = t0;
  // d^2/dt^2 (q t^2 + L t^4) = 2q + 12 L t^2 = 2q - 6q = -4q at t0.
  cp.second_derivative = 2.0 * rf.quad_coef + 12.0 * rf.quartic_coef * t0 * t0;
  cp.nondegenerate = cp.second_derivative != 0.0;
  return cp;
}

double predicted_scale(double t0, double eps) {
  if (!(eps > 0.0) || !(t0 > 0.0)) throw DomainError("predicted_scale needs t0 > 0 and eps > 0");
  return t0 * std::sqrt(eps);
}

std::vector<LadderEntry> family_theorem2(const LgBreakdown& base, const HSParams& p, double f0,
                                         int k_max, LocalMoment moment) {
  validate(p);
  if (!(f0 < 0.0)) throw DomainError("the ladder construction requires f(x0) < 0");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (!std::isfinite(base.total)) throw DomainError("base L_g must be finite");
  const double M = local_moment_value(p, moment);
  const double quad = 0.5 * f0 * bubble_moment(p, MomentKind::mass2);
  std::vector<LadderEntry> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    LadderEntry e;
    e.k = k;
    e.lap_h_shift = -2.0 * p.n / k;
    // The local term is -(1/(4n)) Delta h * M, so the shift -2n/k adds M/(2k).
    e.shift = M / (2.0 * k);
    e.lg_k = base.total + e.shift;
    if (e.lg_k > 0.0) e.t0 = critical_t({quad, e.lg_k}).t0;
    out.push_back(e);
  }
  return out;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical_minimizing: return "subcritical-minimizing";
    case Regime::critical_blowup_candidate: return "critical-blowup-candidate";
    case Regime::critical_degenerate: return "critical-degenerate";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

Verdict verdict(const PotentialJet& jet, const CurvatureData& c, const HSParams& p,
                const LgBreakdown& lg, double rel_tol) {
  validate(p);
  validate(jet);
  validate(c, p.n);
  const double crit = derive_constants(p).c_ns * c.scal;
  const double gap = jet.h0 - crit;
  const double scale = std::max({std::abs(jet.h0), std::abs(crit), 1e-300});
  Verdict v{};
  if (std::abs(gap) > rel_tol * scale && !(jet.h0 == 0.0 && crit == 0.0)) {
    if (gap < 0.0) {
      v.regime = Regime::subcritical_minimizing;
      v.message = "h(x0) < c_ns Scal(x0): minimizing solutions exist, no blow-up family";
    } else {
      v.regime = Regime::supercritical;
      v.message = "h(x0) > c_ns Scal(x0): outside the scope of both blow-up theorems";
    }
    return v;
  }
  const double lscale = std::abs(lg.local_term) + std::abs(lg.nonlocal_term);
  if (lg.total == 0.0 || std::abs(lg.total) <= rel_tol * lscale) {
    v.regime = Regime::critical_degenerate;
    v.message = "critical potential with L_g = 0: the h_k ladder construction applies (requires f(x0) < 0)";
    v.required_f_sign = -1;
    v.f_condition_met = jet.f0 < 0.0;
    return v;
  }
  v.regime = Regime::critical_blowup_candidate;
  v.lg_sign = lg.total > 0.0 ? 1 : -1;
  v.required_f_sign = -v.lg_sign;
  v.f_condition_met = jet.f0 * lg.total < 0.0;
  v.message = std::string("critical potential with L_g ") + (v.lg_sign > 0 ? "> 0" : "< 0") +
              ": blow-up family requires f(x0) " + (v.required_f_sign < 0 ? "< 0" : "> 0");
  return v;
}

}  // namespace hsb

#include "hsb/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hsb/bubble.hpp"
#include "hsb/errors.hpp"

namespace hsb {

double ipq(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("ipq arguments must be finite");
  if (!(q > -1.0)) throw DivergenceError("I_p^q diverges at t = 0 (needs q > -1)");
  if (!(p - q > 1.0)) throw DivergenceError("I_p^q diverges at infinity (needs p - q > 1)");
  return std::exp(std::lgamma(q + 1.0) + std::lgamma(p - q - 1.0) - std::lgamma(p));
}

double ipq_quadrature(double p, double q, const QuadOptions& opts) {
  if (!(q > -1.0)) throw DivergenceError("I_p^q diverges at t = 0 (needs q > -1)");
  if (!(p - q > 1.0)) throw DivergenceError("I_p^q diverges at infinity (needs p - q > 1)");
  RadialIntegrand in;
  in.f = [p](double t) { return std::pow(1.0 + t, -p); };
  in.power = q;
  return integrate_radial(in, opts).value;
}

// The substitution t = r^(2-s) gives q = (b+1)/(2-s) - 1. Every moment goes through here.
double radial_beta_integral(double b, double e, double s) {
  const double q = (b + 1.0) / (2.0 - s) - 1.0;
  return ipq(e, q) / (2.0 - s);
}

namespace {

double radial_beta(double b, double e, double s) { return radial_beta_integral(b, e, s); }

constexpr std::array<const char*, 9> kNames = {"mass2",  "r2mass", "r2grad", "r4grad", "gradsq",
                                               "crit",   "r2crit", "r4crit", "z0grad"};

}  // namespace

const char* moment_name(MomentKind k) { return kNames[static_cast<std::size_t>(k)]; }

MomentKind moment_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (name == kNames[i]) return static_cast<MomentKind>(i);
  throw DomainError("unknown moment kind '" + name + "'");
}

std::vector<MomentKind> all_moments() {
  std::vector<MomentKind> v;
  for (std::size_t i = 0; i < kNames.size(); ++i) v.push_back(static_cast<MomentKind>(i));
  return v;
}

double bubble_moment(const HSParams& p, MomentKind kind) {
  validate(p);
  const ConstantSet c = derive_constants(p);
  const double n = p.n;
  const double s = p.s;
  const double w = sphere_area(p.n - 1);
  const double k2 = c.kappa * c.kappa;
  const double e_mass = 2.0 * (n - 2.0) / (2.0 - s);
  const double e_grad = 2.0 * (n - s) / (2.0 - s);
  const double grad_pre = (n - 2.0) * (n - 2.0) * k2;
  const double crit_pre = k2 * c.kappa_pow;

  switch (kind) {
    case MomentKind::mass2: return w * k2 * radial_beta(n - 1.0, e_mass, s);
    case MomentKind::r2mass: return w * k2 * radial_beta(n + 1.0, e_mass, s);
    case MomentKind::gradsq: return w * grad_pre * radial_beta(n + 1.0 - 2.0 * s, e_grad, s);
    case MomentKind::r2grad: return w * grad_pre * radial_beta(n + 3.0 - 2.0 * s, e_grad, s);
    case MomentKind::r4grad: return w * grad_pre * radial_beta(n + 5.0 - 2.0 * s, e_grad, s);
    case MomentKind::crit: return w * crit_pre * radial_beta(n - 1.0 - s, e_grad, s);
    case MomentKind::r2crit: return w * crit_pre * radial_beta(n + 1.0 - s, e_grad, s);
    case MomentKind::r4crit: return w * crit_pre * radial_beta(n + 3.0 - s, e_grad, s);
    case MomentKind::z0grad: {
      // Z0'^2 r^(n-1) = A^2 (2-s)^2 r^(n+1-2s) (1+t)^(-2m-2) ((1+m) + (1-m) t)^2
      const double m = (n - s) / (2.0 - s);
      const double a = 0.5 * (n - 2.0) * c.kappa * (2.0 - s);
      const std::array<double, 3> coef = {(1.0 + m) * (1.0 + m), 2.0 * (1.0 + m) * (1.0 - m),
                                          (1.0 - m) * (1.0 - m)};
      double sum = 0.0;
      for (int j = 0; j < 3; ++j)
        sum += coef[j] * radial_beta(n + 1.0 - 2.0 * s + (2.0 - s) * j, 2.0 * m + 2.0, s);
      return w * a * a * sum;
    }
  }
  throw DomainError("unknown moment kind");
}

double bubble_moment_quadrature(const HSParams& p, MomentKind kind, const QuadOptions& opts) {
  validate(p);
  // The closed form performs the convergence check.
  (void)bubble_moment(p, kind);
  const Bubble b(p);
  const double n = p.n;
  const double s = p.s;
  const double crit = derive_constants(p).crit_exp;
  RadialIntegrand in;
  switch (kind) {
    case MomentKind::mass2:
    case MomentKind::r2mass:
      in.f = [&b](double r) { const double u = b.U(r); return u * u; };
      in.power = kind == MomentKind::mass2 ? n - 1.0 : n + 1.0;
      break;
    case MomentKind::gradsq:
    case MomentKind::r2grad:
    case MomentKind::r4grad:
      in.f = [&b](double r) { const double d = b.dU(r); return d * d; };
      in.sing = 2.0 - 2.0 * s;
      in.power = n - 1.0 + (kind == MomentKind::gradsq ? 0.0 : kind == MomentKind::r2grad ? 2.0 : 4.0);
      break;
    case MomentKind::crit:
    case MomentKind::r2crit:
    case MomentKind::r4crit:
      in.f = [&b, crit](double r) { return std::pow(b.U(r), crit); };
      in.power = n - 1.0 - s + (kind == MomentKind::crit ? 0.0 : kind == MomentKind::r2crit ? 2.0 : 4.0);
      break;
    case MomentKind::z0grad:
      in.f = [&b](double r) { const double d = b.dZ(r); return d * d; };
      in.sing = 2.0 - 2.0 * s;
      in.power = n - 1.0;
      break;
  }
  return sphere_area(p.n - 1) * integrate_radial(in, opts).value;
}

IdentityReport identity_report(const HSParams& p, const QuadOptions& opts) {
  validate(p);
  if (p.n < 7 || p.s <= 0.0) throw DomainError("identity_report requires n >= 7 and 0 < s < 2");
  const ConstantSet c = derive_constants(p);
  const double n = p.n;
  const double s = p.s;
  const double den = 2.0 * (2.0 * n - 2.0 - s);
  const double two_over = 2.0 / c.crit_exp;

  auto q = [&](MomentKind k) { return bubble_moment_quadrature(p, k, opts); };
  const double mass2 = q(MomentKind::mass2);
  const double r2mass = q(MomentKind::r2mass);
  const double r2grad = q(MomentKind::r2grad);
  const double r4grad = q(MomentKind::r4grad);
  const double r2crit = q(MomentKind::r2crit);
  const double r4crit = q(MomentKind::r4crit);

  const double R1 = r2grad / mass2;
  const double R2 = r2crit / mass2;
  const double R3 = r4grad / r2mass;
  const double R4 = r4crit / r2mass;

  IdentityReport rep{p, {}, 0.0};
  auto row = [&](const char* name, double value, double closed) {
    const double abs_res = std::abs(value - closed);
    const double rel = abs_res / std::abs(closed);
    rep.rows.push_back({name, value, closed, abs_res, rel});
    rep.max_rel_residual = std::max(rep.max_rel_residual, rel);
  };
  row("r2grad/mass2", R1, n * (n - 2.0) * (n + 2.0 - s) / den);
  row("r2crit/mass2", R2, c.kappa_pow * n * (n - 4.0) / ((n - 2.0) * den));
  row("fraction0", R1 - two_over * R2, 6.0 * n * c.c_ns);
  row("r4grad/r2mass", R3, (n - 2.0) * (n + 2.0) * (n + 4.0 - s) / den);
  row("r4crit/r2mass", R4, (n - s) * (n - 6.0) * (n + 2.0) / den);
  row("combined_r4", R3 - two_over * R4, (n + 2.0) * (n - 2.0) * (10.0 - s) / den);
  return rep;
}

}  // namespace hsb

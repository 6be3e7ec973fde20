#include "hsb/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hsb/errors.hpp"

namespace hsb {

Bubble::Bubble(const HSParams& p) : p_(p), c_(derive_constants(p)) {
  k_ = (p_.n - 2.0) / (2.0 - p_.s);
  m_ = (p_.n - p_.s) / (2.0 - p_.s);
  a_ = 0.5 * (p_.n - 2.0) * c_.kappa;
}

double Bubble::U(double r) const {
  const double t = std::pow(r, 2.0 - p_.s);
  return c_.kappa * std::pow(1.0 + t, -k_);
}

double Bubble::dU(double r) const {
  if (r == 0.0) return p_.s < 1.0 ? 0.0 : (p_.s == 1.0 ? -(p_.n - 2.0) * c_.kappa : -INFINITY);
  const double t = std::pow(r, 2.0 - p_.s);
  return -(p_.n - 2.0) * c_.kappa * std::pow(r, 1.0 - p_.s) * std::pow(1.0 + t, -m_);
}

double Bubble::d2U(double r) const {
  const double s = p_.s;
  const double t = std::pow(r, 2.0 - s);
  return -(p_.n - 2.0) * c_.kappa * std::pow(r, -s) * std::pow(1.0 + t, -m_ - 1.0) *
         ((1.0 - s) * (1.0 + t) - (p_.n - s) * t);
}

double Bubble::Z(double r) const {
  const double t = std::pow(r, 2.0 - p_.s);
  return a_ * (t - 1.0) * std::pow(1.0 + t, -m_);
}

// With g(t) = (1+t)^(-m-1) ((1+m) + (1-m) t) one has Z0' = A (2-s) r^(1-s) g(t).
double Bubble::dZ(double r) const {
  const double s = p_.s;
  const double t = std::pow(r, 2.0 - s);
  const double g = std::pow(1.0 + t, -m_ - 1.0) * ((1.0 + m_) + (1.0 - m_) * t);
  return a_ * (2.0 - s) * std::pow(r, 1.0 - s) * g;
}

double Bubble::d2Z(double r) const {
  const double s = p_.s;
  const double t = std::pow(r, 2.0 - s);
  const double g = std::pow(1.0 + t, -m_ - 1.0) * ((1.0 + m_) + (1.0 - m_) * t);
  const double dg = -(m_ + 1.0) * std::pow(1.0 + t, -m_ - 2.0) * ((1.0 + m_) + (1.0 - m_) * t) +
                    std::pow(1.0 + t, -m_ - 1.0) * (1.0 - m_);
  return a_ * (2.0 - s) * std::pow(r, -s) * ((1.0 - s) * g + (2.0 - s) * t * dg);
}

double Bubble::V(double r) const {
  const double t = std::pow(r, 2.0 - p_.s);
  // U1^(2*-2) = kappa_pow (1+t)^(-2)
  return (c_.crit_exp - 1.0) * c_.kappa_pow * std::pow(r, -p_.s) / ((1.0 + t) * (1.0 + t));
}

double Bubble::nonlinearity(double r) const {
  const double t = std::pow(r, 2.0 - p_.s);
  return c_.kappa_pow * std::pow(r, -p_.s) * U(r) / ((1.0 + t) * (1.0 + t));
}

ProfilePoint eval_profiles(const HSParams& p, double delta, double r) {
  validate(p);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("scale delta must be positive");
  if (!(r >= 0.0)) throw DomainError("radius must be non-negative");
  const Bubble b(p);
  const double amp = std::pow(delta, -0.5 * (p.n - 2.0));
  const double rho = r / delta;
  ProfilePoint out{};
  out.U = amp * b.U(rho);
  out.dr_U = amp * b.dU(rho) / delta;
  out.Z = amp * b.Z(rho);
  out.ddelta_U = out.Z / delta;
  return out;
}

std::vector<double> RadialGrid::nodes() const {
  validate(*this);
  std::vector<double> r(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) r[i] = r_max * std::pow(static_cast<double>(i) / N, gamma);
  r[N] = r_max;
  return r;
}

RadialGrid default_grid(const HSParams& p) {
  validate(p);
  return RadialGrid{200.0, 8000, 2.0 / (2.0 - p.s)};
}

void validate(const RadialGrid& g) {
  if (g.N < 8) throw DomainError("radial grid needs at least 8 intervals");
  if (!(g.r_max > 0.0) || !std::isfinite(g.r_max)) throw DomainError("grid r_max must be positive");
  if (!(g.gamma >= 1.0) || !std::isfinite(g.gamma)) throw DomainError("grid gamma must be >= 1");
}

namespace {

struct Derivs {
  double u, du, d2u;
};

// Fourth-order central differences in the uniform coordinate xi = i/N,
// mapped to r = r_max xi^gamma by the chain rule.
Derivs fd4(const std::function<double(double)>& f, const RadialGrid& g, int i) {
  const double h = 1.0 / g.N;
  auto at = [&](int j) { return f(g.r_max * std::pow(static_cast<double>(j) * h, g.gamma)); };
  const double fm2 = at(i - 2), fm1 = at(i - 1), f0 = at(i), fp1 = at(i + 1), fp2 = at(i + 2);
  const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  const double xi = i * h;
  const double r1 = g.r_max * g.gamma * std::pow(xi, g.gamma - 1.0);
  const double r2 = g.r_max * g.gamma * (g.gamma - 1.0) * std::pow(xi, g.gamma - 2.0);
  const double du = d1 / r1;
  const double d2u = (d2 - du * r2) / (r1 * r1);
  return {f0, du, d2u};
}

}  // namespace

PdeResidual pde_residual(const HSParams& p, const RadialGrid& grid, DerivativeMethod method) {
  validate(p);
  if (p.s <= 0.0) throw DomainError("pde_residual requires 0 < s < 2");
  validate(grid);
  const Bubble b(p);
  const double n = p.n;
  const std::vector<double> r = grid.nodes();

  auto defect = [&](const Derivs& d, double rhs, double ri) {
    const double lap = -d.d2u - (n - 1.0) * d.du / ri;
    const double scale = std::abs(d.d2u) + (n - 1.0) * std::abs(d.du / ri) + std::abs(rhs);
    return scale > 0.0 ? std::abs(lap - rhs) / scale : 0.0;
  };

  PdeResidual out{0.0, 0.0};
  const int lo = method == DerivativeMethod::analytic ? 1 : 2;
  const int hi = method == DerivativeMethod::analytic ? grid.N : grid.N - 2;
  std::function<double(double)> fu = [&](double x) { return b.U(x); };
  std::function<double(double)> fz = [&](double x) { return b.Z(x); };
  for (int i = lo; i <= hi; ++i) {
    const double ri = r[i];
    Derivs du{}, dz{};
    if (method == DerivativeMethod::analytic) {
      du = {b.U(ri), b.dU(ri), b.d2U(ri)};
      dz = {b.Z(ri), b.dZ(ri), b.d2Z(ri)};
    } else {
      du = fd4(fu, grid, i);
      dz = fd4(fz, grid, i);
    }
    out.max_rel_residual_U = std::max(out.max_rel_residual_U, defect(du, b.nonlinearity(ri), ri));
    out.max_rel_residual_Z = std::max(out.max_rel_residual_Z, defect(dz, b.V(ri) * dz.u, ri));
  }
  return out;
}

}  // namespace hsb

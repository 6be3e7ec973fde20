#include "hsb/energy.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hsb/bubble.hpp"
#include "hsb/errors.hpp"
#include "hsb/moments.hpp"
#include "hsb/quadrature.hpp"

namespace hsb {

void validate(const RadialModel& m, int n) {
  if (!(m.r0 > 0.0) || !std::isfinite(m.r0)) throw DomainError("cutoff radius r0 must be positive");
  validate(m.curvature, n);
  validate(m.jet);
  const DensityCoeffs d = density_coeffs(m.curvature, n);
  // G is a quadratic in x = r^2; check the endpoints and the interior extremum.
  const double xmax = 4.0 * m.r0 * m.r0;
  auto G = [&](double x) { return 1.0 + d.c2 * x + d.c4 * x * x; };
  double gmin = std::min(G(0.0), G(xmax));
  if (d.c4 != 0.0) {
    const double xs = -d.c2 / (2.0 * d.c4);
    if (xs > 0.0 && xs < xmax) gmin = std::min(gmin, G(xs));
  }
  if (!(gmin > 0.0))
    throw DomainError("truncated volume density is not positive on [0, 2 r0]; reduce r0");
}

double j_at_bubble(const RadialModel& m, const HSParams& p, double delta) {
  require_expansion_regime(p, "j_at_bubble");
  validate(m, p.n);
  if (!(delta > 0.0) || delta > m.r0 / 10.0 || !std::isfinite(delta))
    throw DomainError("delta must satisfy 0 < delta <= r0/10");
  const Bubble b(p);
  const ConstantSet c = derive_constants(p);
  const DensityCoeffs d = density_coeffs(m.curvature, p.n);
  const double n = p.n;
  const double s = p.s;
  const double h0 = m.jet.h0;
  const double hq = -m.jet.lap_h / (2.0 * n);
  const double d2 = delta * delta;

  // r = delta rho: the gradient and critical terms are scale invariant and the
  // potential term picks up delta^2.
  RadialIntegrand in;
  in.upper = m.r0 / delta;
  in.sing = std::min(n - 1.0 - s, n + 1.0 - 2.0 * s);
  in.f = [&](double rho) {
    const double x = d2 * rho * rho;  // r^2
    const double G = 1.0 + d.c2 * x + d.c4 * x * x;
    const double u = b.U(rho);
    const double du = b.dU(rho);
    const double rn = std::pow(rho, n - 1.0);
    const double hbar = h0 + hq * x;
    return (0.5 * (du * du + d2 * hbar * u * u) * rn -
            std::pow(u, c.crit_exp) * rn * std::pow(rho, -s) / c.crit_exp) *
           G;
  };
  QuadOptions opts;
  opts.tol = 1e-13;
  return sphere_area(p.n - 1) * integrate_radial(in, opts).value;
}

namespace {

double c4_bracket(const RadialModel& m, const HSParams& p) {
  const double n = p.n;
  const double s = p.s;
  const double F = density_coeffs(m.curvature, p.n).c4;
  return m.jet.lap_h + m.curvature.scal * m.jet.h0 / 3.0 -
         F * n * (n + 2.0) * (n - 2.0) * (10.0 - s) / (2.0 * n - 2.0 - s);
}

}  // namespace

ExpansionCoeffs predicted_coeffs(const RadialModel& m, const HSParams& p) {
  require_expansion_regime(p, "predicted_coeffs");
  validate(m, p.n);
  const ConstantSet c = derive_constants(p);
  const double n = p.n;
  const double s = p.s;
  ExpansionCoeffs out;
  out.c0 = (2.0 - s) / (2.0 * (n - s)) * bubble_moment(p, MomentKind::crit);
  out.c2 = 0.5 * (m.jet.h0 - c.c_ns * m.curvature.scal) * bubble_moment(p, MomentKind::mass2);
  out.c4 = -c4_bracket(m, p) / (4.0 * n) * bubble_moment(p, MomentKind::r2mass);
  return out;
}

double predicted_c4_r4grad(const RadialModel& m, const HSParams& p) {
  require_expansion_regime(p, "predicted_coeffs");
  validate(m, p.n);
  return -c4_bracket(m, p) / (4.0 * p.n) * bubble_moment(p, MomentKind::r4grad);
}

FitReport fit_expansion(const RadialModel& m, const HSParams& p, const std::vector<double>& deltas) {
  require_expansion_regime(p, "fit_expansion");
  if (deltas.size() < 6) throw NumericalError("energy fit needs at least 6 deltas");
  const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
  if (!(*lo > 0.0) || *hi / *lo < 2.0)
    throw NumericalError("energy fit is ill-conditioned: delta sweep must span a factor of 2");

  FitReport rep{};
  rep.deltas = deltas;
  for (double dl : deltas) rep.values.push_back(j_at_bubble(m, p, dl));

  // Columns 1, x, x^2 with x = (delta/delta_max)^2 keep the system well scaled.
  const int rows = static_cast<int>(deltas.size());
  const double dmax = *hi;
  Eigen::MatrixXd X(rows, 3);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    const double x = (deltas[i] / dmax) * (deltas[i] / dmax);
    X(i, 0) = 1.0;
    X(i, 1) = x;
    X(i, 2) = x * x;
    y(i) = rep.values[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < 3) throw NumericalError("energy fit design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd res = y - X * beta;
  for (int i = 0; i < rows; ++i) rep.residuals.push_back(res(i));
  const double sigma2 = res.squaredNorm() / std::max(1, rows - 3);
  const Eigen::MatrixXd cov = sigma2 * (X.transpose() * X).inverse();

  const double s2 = dmax * dmax;
  const double s4 = s2 * s2;
  rep.c0_fit = beta(0);
  rep.c2_fit = beta(1) / s2;
  rep.c4_fit = beta(2) / s4;
  rep.c0_se = std::sqrt(std::max(0.0, cov(0, 0)));
  rep.c2_se = std::sqrt(std::max(0.0, cov(1, 1))) / s2;
  rep.c4_se = std::sqrt(std::max(0.0, cov(2, 2))) / s4;

  const ExpansionCoeffs pred = predicted_coeffs(m, p);
  rep.c0_pred = pred.c0;
  rep.c2_pred = pred.c2;
  rep.c4_pred = pred.c4;
  rep.c4_pred_r4grad = predicted_c4_r4grad(m, p);
  rep.c2_reference = 0.5 * derive_constants(p).c_ns * m.curvature.scal *
                     bubble_moment(p, MomentKind::mass2);

  auto rel = [](double fit, double pred, double scale) {
    const double den = std::max(std::abs(pred), std::abs(scale));
    return den > 0.0 ? std::abs(fit - pred) / den : std::abs(fit - pred);
  };
  rep.c0_rel_dev = rel(rep.c0_fit, rep.c0_pred, 0.0);
  rep.c2_rel_dev = rel(rep.c2_fit, rep.c2_pred, rep.c2_reference);
  rep.c4_rel_dev = rel(rep.c4_fit, rep.c4_pred, 0.0);
  return rep;
}

std::vector<double> parse_sweep(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw DomainError("delta sweep must look like lo:hi:count");
  double lo = 0.0, hi = 0.0;
  long count = 0;
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    const std::string s1 = spec.substr(0, a), s2 = spec.substr(a + 1, b - a - 1),
                      s3 = spec.substr(b + 1);
    lo = std::stod(s1, &u1);
    hi = std::stod(s2, &u2);
    count = std::stol(s3, &u3);
    if (u1 != s1.size() || u2 != s2.size() || u3 != s3.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw DomainError("cannot parse delta sweep '" + spec + "'");
  }
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw DomainError("delta sweep needs 0 < lo < hi and count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  out.back() = hi;
  return out;
}

namespace {

// Integral over S^(n-1) of |A + B tau (u^2 - 1/n)|^p, u the cosine to the axis.
double angular_lp(double A, double B, double tau, int n, double pexp) {
  if (tau == 0.0 || B == 0.0) return sphere_area(n - 1) * std::pow(std::abs(A), pexp);
  const double half = 0.5 * (n - 3.0);
  auto g = [=](double u) {
    return std::pow(std::abs(A + B * tau * (u * u - 1.0 / n)), pexp) * std::pow(1.0 - u * u, half);
  };
  std::vector<double> breaks;
  const double u2 = 1.0 / n - A / (B * tau);
  if (u2 > 0.0 && u2 < 1.0) breaks.push_back(std::sqrt(u2));
  QuadOptions opts;
  opts.tol = 1e-13;
  return 2.0 * sphere_area(n - 2) * integrate_interval(g, 0.0, 1.0, breaks, opts).value;
}

struct RemainderShape {
  double h0, extra, third, tau, pexp;
};

RemainderShape remainder_shape(const CurvatureData& c, const HSParams& p, double h0) {
  require_expansion_regime(p, "remainder_alpha");
  validate(c, p.n);
  if (!std::isfinite(h0)) throw DomainError("h0 must be finite");
  const double n = p.n;
  RemainderShape sh;
  sh.h0 = h0;
  sh.extra = c.scal / (3.0 * n);
  sh.third = 1.0 / 3.0;
  sh.tau = std::sqrt(c.tfree_ric_norm2(p.n) * n / (n - 1.0));
  sh.pexp = 2.0 * n / (n + 2.0);
  return sh;
}

double remainder_norm(const RemainderShape& sh, const HSParams& p, double delta) {
  const Bubble b(p);
  const double amp = std::pow(delta, -0.5 * (p.n - 2.0));
  RadialIntegrand in;
  in.power = p.n - 1.0;
  in.f = [&](double r) {
    const double rho = r / delta;
    const double rdu = amp * b.rdU(rho);
    const double A = sh.h0 * amp * b.U(rho) + sh.extra * rdu;
    const double B = sh.third * rdu;
    return angular_lp(A, B, sh.tau, p.n, sh.pexp);
  };
  QuadOptions opts;
  opts.tol = 1e-12;
  const double I = integrate_radial(in, opts).value;
  return std::pow(I, 1.0 / sh.pexp);
}

}  // namespace

RemainderReport remainder_alpha(const CurvatureData& c, const HSParams& p, double h0) {
  const RemainderShape sh = remainder_shape(c, p, h0);
  RemainderReport out;
  out.tau = sh.tau;
  if (h0 == 0.0 && c.scal == 0.0 && sh.tau == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.alpha_inv = remainder_norm(sh, p, 1.0);
  if (out.alpha_inv == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.alpha = 1.0 / out.alpha_inv;
  return out;
}

double remainder_norm_at_scale(const CurvatureData& c, const HSParams& p, double h0, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  const RemainderShape sh = remainder_shape(c, p, h0);
  if (h0 == 0.0 && c.scal == 0.0 && sh.tau == 0.0) return 0.0;
  return remainder_norm(sh, p, delta);
}

double bubble_lp_norm_closed(const HSParams& p) {
  validate(p);
  const ConstantSet c = derive_constants(p);
  const double n = p.n;
  const double pexp = 2.0 * n / (n + 2.0);
  const double k = (n - 2.0) / (2.0 - p.s);
  const double I = sphere_area(p.n - 1) * std::pow(c.kappa, pexp) *
                   radial_beta_integral(n - 1.0, k * pexp, p.s);
  return std::pow(I, 1.0 / pexp);
}

}  // namespace hsb

#include "hsb/params.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hsb/errors.hpp"

namespace hsb {

void validate(const HSParams& p) {
  if (p.n < 3) throw DomainError("dimension n must be at least 3");
  if (!std::isfinite(p.s) || p.s < 0.0) throw DomainError("singularity exponent s must satisfy s >= 0");
  if (p.s >= 2.0) throw DomainError("singularity exponent s must satisfy s < 2");
}

HSParams make_params(int n, double s) {
  HSParams p{n, s};
  validate(p);
  return p;
}

void require_expansion_regime(const HSParams& p, const char* what) {
  validate(p);
  if (p.s <= 0.0) throw DomainError(std::string(what) + " requires 0 < s < 2");
  if (p.n < 7) throw DomainError(std::string(what) + " requires n >= 7");
}

ConstantSet derive_constants(const HSParams& p) {
  validate(p);
  const double n = p.n;
  const double s = p.s;
  ConstantSet c{};
  c.crit_exp = 2.0 * (n - s) / (n - 2.0);
  c.kappa_pow = (n - s) * (n - 2.0);
  c.kappa = std::pow(c.kappa_pow, (n - 2.0) / (2.0 * (2.0 - s)));
  c.c_ns = (n - 2.0) * (6.0 - s) / (12.0 * (2.0 * n - 2.0 - s));
  c.lambda_ns = (n - 2.0) * (10.0 - s) / (20.0 * (2.0 * n - 2.0 - s));
  return c;
}

double kappa_pow_by_exponent(const HSParams& p) {
  const ConstantSet c = derive_constants(p);
  return std::pow(c.kappa, c.crit_exp - 2.0);
}

double sphere_area(int d) {
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Rational::str() const {
  std::ostringstream os;
  os << num_;
  if (den_ != 1) os << '/' << den_;
  return os.str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational c_ns_exact(int n, const Rational& s) {
  const Rational N(n);
  return (N - 2) * (Rational(6) - s) / (Rational(12) * (Rational(2) * N - 2 - s));
}

Rational lambda_ns_exact(int n, const Rational& s) {
  const Rational N(n);
  return (N - 2) * (Rational(10) - s) / (Rational(20) * (Rational(2) * N - 2 - s));
}

Rational crit_exp_exact(int n, const Rational& s) {
  const Rational N(n);
  return Rational(2) * (N - s) / (N - 2);
}

YamabeReport yamabe_consistency(int n) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  YamabeReport r{c_ns_exact(n, 0), lambda_ns_exact(n, 0), Rational(n - 2, 4 * (n - 1)), false};
  r.consistent = (r.c_at_0 == r.yamabe) && (r.lambda_at_0 == r.yamabe);
  return r;
}

}  // namespace hsb

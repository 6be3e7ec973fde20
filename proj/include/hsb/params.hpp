#pragma once

#include <cstdint>
#include <string>

namespace hsb {

/// Dimension and singularity exponent. Construct through make_params so the
/// invariants n >= 3 and 0 <= s < 2 are checked.
struct HSParams {
  int n = 7;
  double s = 1.0;
};

HSParams make_params(int n, double s);

/// Throws DomainError unless n >= 3 and 0 <= s < 2.
void validate(const HSParams& p);

/// Expansion operations need 0 < s < 2 and n >= 7.
void require_expansion_regime(const HSParams& p, const char* what);

struct ConstantSet {
  double crit_exp;   // 2*(s) = 2(n-s)/(n-2)
  double kappa;      // bubble normalisation
  double c_ns;
  double lambda_ns;
  double kappa_pow;  // kappa^(2*(s)-2), equal to (n-s)(n-2)
};

ConstantSet derive_constants(const HSParams& p);

/// kappa^(2*(s)-2) evaluated by exponentiation, for cross-checks only.
double kappa_pow_by_exponent(const HSParams& p);

/// Area of the unit sphere S^d in R^(d+1).
double sphere_area(int d);

/// Exact fraction with 64-bit numerator and denominator, always reduced and
/// with a positive denominator.
class Rational {
public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

private:
  std::int64_t num_;
  std::int64_t den_;
};

Rational c_ns_exact(int n, const Rational& s);
Rational lambda_ns_exact(int n, const Rational& s);
Rational crit_exp_exact(int n, const Rational& s);

struct YamabeReport {
  Rational c_at_0;
  Rational lambda_at_0;
  Rational yamabe;  // (n-2)/(4(n-1))
  bool consistent;
};

YamabeReport yamabe_consistency(int n);

}  // namespace hsb

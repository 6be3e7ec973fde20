#include <doctest.h>

#include <cmath>
#include <limits>

#include "hsb/errors.hpp"
#include "hsb/params.hpp"

using namespace hsb;

TEST_CASE("constants at (7, 1)") {
  const auto c = derive_constants(make_params(7, 1.0));
  CHECK(c.crit_exp == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(c.kappa == doctest::Approx(4929.503017546495).epsilon(1e-14));
  CHECK(c.c_ns == doctest::Approx(25.0 / 132.0).epsilon(1e-15));
  CHECK(c.lambda_ns == doctest::Approx(9.0 / 44.0).epsilon(1e-15));
  CHECK(c.kappa_pow == 30.0);
}

TEST_CASE("constants at (8, 0.5)") {
  const auto c = derive_constants(make_params(8, 0.5));
  CHECK(c.crit_exp == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(c.c_ns == doctest::Approx(11.0 / 54.0).epsilon(1e-15));
  CHECK(c.lambda_ns == doctest::Approx(19.0 / 90.0).epsilon(1e-15));
}

TEST_CASE("s = 0 collapses both constants onto the Yamabe constant") {
  const auto c = derive_constants(make_params(7, 0.0));
  CHECK(c.c_ns == doctest::Approx(5.0 / 24.0).epsilon(1e-15));
  CHECK(c.lambda_ns == doctest::Approx(5.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("kappa power agrees with direct exponentiation") {
  for (int n = 3; n <= 12; ++n)
    for (double s : {0.0, 0.25, 1.0, 1.75}) {
      const auto p = make_params(n, s);
      CHECK(kappa_pow_by_exponent(p) == doctest::Approx(derive_constants(p).kappa_pow).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_params(2, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(7, 2.0), DomainError);
  CHECK_THROWS_AS(make_params(7, -0.1), DomainError);
  CHECK_THROWS_AS(make_params(7, std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_NOTHROW(make_params(3, 0.0));
  CHECK_THROWS_AS(require_expansion_regime(make_params(6, 1.0), "test"), DomainError);
  CHECK_THROWS_AS(require_expansion_regime(make_params(7, 0.0), "test"), DomainError);
  CHECK_NOTHROW(require_expansion_regime(make_params(7, 1.0), "test"));
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_area(2) == doctest::Approx(4.0 * M_PI));
  CHECK(sphere_area(6) == doctest::Approx(16.0 * std::pow(M_PI, 3) / 15.0).epsilon(1e-14));
}

TEST_CASE("rational arithmetic stays reduced") {
  const Rational a(6, -8);
  CHECK(a.num() == -3);
  CHECK(a.den() == 4);
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
  CHECK((Rational(1, 2) - Rational(1, 2)).str() == "0");
  CHECK(Rational(5, 24).str() == "5/24");
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("exact constants") {
  CHECK(c_ns_exact(7, Rational(1)) == Rational(25, 132));
  CHECK(lambda_ns_exact(7, Rational(1)) == Rational(9, 44));
  CHECK(crit_exp_exact(7, Rational(1)) == Rational(12, 5));
  CHECK(c_ns_exact(8, Rational(1, 2)) == Rational(11, 54));
}

TEST_CASE("Yamabe consistency for n = 3..12") {
  const Rational expected[] = {Rational(1, 8), Rational(1, 6), Rational(3, 16), Rational(1, 5),
                               Rational(5, 24), Rational(3, 14), Rational(7, 32), Rational(2, 9),
                               Rational(9, 40)};
  for (int n = 3; n <= 11; ++n) {
    const auto y = yamabe_consistency(n);
    CHECK(y.consistent);
    CHECK(y.yamabe == expected[n - 3]);
    CHECK(y.c_at_0 == y.yamabe);
    CHECK(y.lambda_at_0 == y.yamabe);
  }
  CHECK(yamabe_consistency(12).yamabe == Rational(5, 22));
}

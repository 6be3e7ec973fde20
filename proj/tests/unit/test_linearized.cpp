#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hsb/errors.hpp"
#include "hsb/linearized.hpp"
#include "hsb/moments.hpp"

using namespace hsb;

namespace {

RadialGrid grid_with(const HSParams& p, int N) {
  auto g = default_grid(p);
  g.N = N;
  return g;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// <f, Z0> over R^n for a radial f.
double pair_with_z0(const HSParams& p, const RadialFunction& f) {
  const Bubble b(p);
  RadialIntegrand in;
  in.f = [&](double r) { return f(r) * b.Z(r); };
  in.power = p.n - 1.0;
  return sphere_area(p.n - 1) * integrate_radial(in, {1e-13, 1000000}).value;
}

}  // namespace

TEST_CASE("zero input gives a zero correction") {
  const auto p = make_params(7, 1.0);
  const auto res = hat_c(p, WDecomposition{}, grid_with(p, 400));
  CHECK(sup_abs(res.mode0.u) == 0.0);
  CHECK(sup_abs(res.mode2.u) == 0.0);
  CHECK(res.nonlocal_term == 0.0);
  CHECK(res.projection == 0.0);
}

TEST_CASE("flat curvature with a = 1 has no quadrupole part") {
  const auto p = make_params(7, 1.0);
  const auto res = hat_c(p, WDecomposition{1.0, 0.0, 0.0}, grid_with(p, 400));
  CHECK(sup_abs(res.mode2.u) == 0.0);
  CHECK(sup_abs(res.mode0.u) > 0.0);
  CHECK(res.mode0.z0_orthogonality < 1e-8);
  CHECK(res.projection ==
        doctest::Approx(w_z0_pairing(p, {1.0, 0.0, 0.0}) / bubble_moment(p, MomentKind::z0grad)));
}

TEST_CASE("trivial cancellation: W aligned with the kernel source") {
  // W = -Delta Z0 = V Z0 pairs with Z0 to int |grad Z0|^2, so the projected
  // right-hand side vanishes and so does the correction.
  for (auto [n, s] : {std::pair{7, 1.0}, std::pair{9, 0.5}}) {
    const auto p = make_params(n, s);
    const Bubble b(p);
    const RadialFunction vz = [&](double r) { return b.V(r) * b.Z(r); };
    CHECK(pair_with_z0(p, vz) / bubble_moment(p, MomentKind::z0grad) == doctest::Approx(1.0).epsilon(1e-9));
    const auto g = grid_with(p, 1000);
    const auto sol = solve_projected(p, vz, g);
    double scale = 0.0;
    for (double r : g.nodes()) scale = std::max(scale, std::abs(vz(r)));
    CHECK(sup_abs(sol.u) <= 1e-8 * scale);
  }
}

TEST_CASE("projected solve agrees with the decomposition path") {
  const auto p = make_params(7, 1.0);
  const Bubble b(p);
  const auto g = grid_with(p, 600);
  const auto direct = solve_projected(p, [&](double r) { return 0.5 * b.U(r) - 2.0 * b.rdU(r); }, g);
  const auto viaw = hat_c(p, WDecomposition{0.5, -2.0, 0.0}, g).mode0;
  const double scale = sup_abs(viaw.u);
  for (std::size_t i = 0; i < direct.u.size(); ++i) CHECK(std::abs(direct.u[i] - viaw.u[i]) <= 1e-8 * scale);
}

TEST_CASE("solvability is enforced for the radial mode") {
  const auto p = make_params(7, 1.0);
  const Bubble b(p);
  CHECK_THROWS_AS(solve_mode(p, 0, [&](double r) { return b.V(r) * b.Z(r); }, grid_with(p, 200)),
                  SolvabilityError);
  CHECK_THROWS_AS(solve_mode(p, 1, [](double) { return 0.0; }, grid_with(p, 200)), DomainError);
}

TEST_CASE("linearity of the mode solves") {
  const auto p = make_params(7, 1.0);
  const Bubble b(p);
  const auto g = grid_with(p, 800);
  const RadialFunction f = [&](double r) { return -b.rdU(r) / 3.0; };
  const auto u1 = solve_mode(p, 2, f, g);
  const auto u2 = solve_mode(p, 2, [&](double r) { return 2.0 * f(r); }, g);
  const double scale = sup_abs(u1.u);
  for (std::size_t i = 0; i < u1.u.size(); ++i) CHECK(std::abs(u2.u[i] - 2.0 * u1.u[i]) <= 1e-6 * scale);
}

TEST_CASE("nonlocal term is a quadratic form") {
  const auto p = make_params(7, 1.0);
  const auto g = grid_with(p, 800);
  const WDecomposition w{0.7, 0.3, 2.0};
  const double base = nonlocal_term(p, w, g);
  for (double lam : {-1.0, 0.5, 3.0}) {
    const WDecomposition wl{lam * w.a, lam * w.mode0_extra, lam * lam * w.t_free_norm2};
    CHECK(nonlocal_term(p, wl, g) == doctest::Approx(lam * lam * base).epsilon(1e-6));
  }
  CHECK(nonlocal_term(p, WDecomposition{}, g) == 0.0);
}

TEST_CASE("bilinear pairing is symmetric") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.0, 3.0);
  for (auto [n, s] : {std::pair{7, 1.0}, std::pair{10, 0.5}}) {
    const auto p = make_params(n, s);
    const auto g = grid_with(p, 600);
    for (int trial = 0; trial < 4; ++trial) {
      const WDecomposition w1{u(rng), u(rng), pos(rng)}, w2{u(rng), u(rng), pos(rng)};
      const double t_inner = u(rng) / 2.0 * std::sqrt(w1.t_free_norm2 * w2.t_free_norm2);
      const double a = bilinear_pairing(p, w1, w2, t_inner, g);
      const double b = bilinear_pairing(p, w2, w1, t_inner, g);
      CHECK(std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b)));
    }
  }
}

TEST_CASE("bilinear pairing on the diagonal is the nonlocal term") {
  const auto p = make_params(8, 1.25);
  const auto g = grid_with(p, 600);
  const WDecomposition w{0.4, -0.2, 1.5};
  CHECK(bilinear_pairing(p, w, w, w.t_free_norm2, g) ==
        doctest::Approx(nonlocal_term(p, w, g)).epsilon(1e-10));
}

TEST_CASE("nonlocal term converges under mesh doubling") {
  const auto p = make_params(7, 1.0);
  const WDecomposition w{42.0 / 11.0, 42.0 / 21.0, 0.0};
  const double v1 = nonlocal_term(p, w, grid_with(p, 500));
  const double v2 = nonlocal_term(p, w, grid_with(p, 1000));
  const double v3 = nonlocal_term(p, w, grid_with(p, 2000));
  const double order = std::log2(std::abs(v1 - v2) / std::abs(v2 - v3));
  CHECK(order >= 2.0);
  CHECK(std::abs(v2 - v3) <= 1e-6 * std::abs(v3));
}

TEST_CASE("kernel structure") {
  for (auto [n, s] : {std::pair{7, 1.0}, std::pair{9, 0.5}, std::pair{9, 1.5}}) {
    const auto p = make_params(n, s);
    INFO("n=", n, " s=", s);
    const auto k1 = kernel_diagnostics(p, grid_with(p, 2000));
    const auto k2 = kernel_diagnostics(p, grid_with(p, 4000));
    CHECK(k1.mode0_near_zero_count == 1);
    CHECK(std::abs(k2.mode0_min_eig) < 1e-6);
    CHECK(k2.mode0_eigvec_alignment_with_Z0 >= 0.999);
    CHECK(k2.mode2_min_eig > 0.0);
    CHECK(std::abs(k2.mode2_min_eig / k1.mode2_min_eig - 1.0) <= 0.05);
    // the radial spectrum has exactly one negative direction, the bubble itself
    REQUIRE(!k2.mode0_lowest.empty());
    CHECK(k2.mode0_lowest.front() < 0.0);
  }
}

TEST_CASE("multiplier beta") {
  const auto p = make_params(7, 1.0);
  const double pu = w_z0_pairing(p, {1.0, 0.0, 0.0});
  const double pr = w_z0_pairing(p, {0.0, 1.0, 0.0});
  const double z0g = bubble_moment(p, MomentKind::z0grad);
  CHECK(beta_coefficient(p, {pr, -pu, 5.0}, 3.0) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  const WDecomposition aligned{z0g / pu, 0.0, 0.0};
  CHECK(beta_coefficient(p, aligned, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(beta_coefficient(p, aligned, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pair_with_z0(p, [b = Bubble(p)](double r) { return b.U(r); }) == doctest::Approx(pu).epsilon(1e-9));
}

TEST_CASE("angular quadrupole factor by Monte Carlo") {
  constexpr int n = 7;
  CHECK(angular_quadrupole_factor(n) == doctest::Approx(2.0 / 63.0).epsilon(1e-15));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  double T[n][n];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) T[i][j] = T[j][i] = gauss(rng);
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += T[i][i];
  for (int i = 0; i < n; ++i) T[i][i] -= tr / n;
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm2 += T[i][j] * T[i][j];

  constexpr int samples = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    double x[n], len2 = 0.0;
    for (double& xi : x) {
      xi = gauss(rng);
      len2 += xi * xi;
    }
    double q = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += T[i][j] * x[i] * x[j];
    const double v = q * q / (len2 * len2 * norm2);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((sum2 / samples - mean * mean) / samples);
  CHECK(std::abs(mean - 2.0 / 63.0) <= 3.0 * sigma);
}

TEST_CASE("decomposition validation") {
  CHECK_THROWS_AS(validate(WDecomposition{1.0, 0.0, -1.0}), DomainError);
  CHECK_NOTHROW(validate(WDecomposition{1.0, 2.0, 0.0}));
}

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsb/bubble.hpp"
#include "hsb/energy.hpp"
#include "hsb/geometry.hpp"
#include "hsb/linearized.hpp"
#include "hsb/moments.hpp"
#include "hsb/params.hpp"
#include "hsb/reduction.hpp"

using namespace hsb;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed += " [failed: " + what + "]";
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

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

Outcome check_moment_ratios() {
  Outcome o;
  double worst = 0.0, worst_frac = 0.0;
  int cases = 0;
  for (int n = 7; n <= 12; ++n)
    for (int i = 1; i <= 7; ++i) {
      const auto p = make_params(n, 0.25 * i);
      const auto rep = identity_report(p);
      for (const auto& row : rep.rows) {
        worst = std::max(worst, row.rel_residual);
        if (row.name == "fraction0") {
          const double target = 6.0 * n * derive_constants(p).c_ns;
          worst_frac = std::max(worst_frac, std::abs(row.quadrature - target) / std::abs(target));
        }
      }
      ++cases;
    }
  o.detail << cases << " (n,s) cases, max ratio rel residual " << worst << ", fraction0 " << worst_frac;
  o.require(worst <= 1e-8, "ratio residual <= 1e-8");
  o.require(worst_frac <= 1e-8, "fraction0 residual <= 1e-8");
  return o;
}

Outcome check_yamabe() {
  Outcome o;
  int ok = 0;
  for (int n = 3; n <= 12; ++n) {
    const auto r = yamabe_consistency(n);
    const Rational expect(n - 2, 4 * (n - 1));
    const bool good = r.consistent && r.c_at_0 == expect && r.lambda_at_0 == expect && r.yamabe == expect;
    o.require(good, "n = " + std::to_string(n));
    ok += good;
  }
  o.detail << ok << "/10 dimensions exact, n = 12 gives " << yamabe_consistency(12).yamabe.str();
  return o;
}

Outcome check_pde_identities() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(3, 12);
  std::uniform_real_distribution<double> sd(0.0, 1.9);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto p = make_params(dim(rng), sd(rng));
    const auto res = pde_residual(p, default_grid(p));
    worst = std::max({worst, res.max_rel_residual_U, res.max_rel_residual_Z});
  }
  o.require(worst <= 1e-10, "pde residual <= 1e-10");

  // d/d delta of U_delta at delta = 1 against Z0: central differences with
  // step h and h/2 show second order, and their Richardson combination agrees.
  double min_order = 1e9, worst_rich = 0.0;
  for (auto [n, s] : {std::pair{7, 1.0}, std::pair{10, 0.4}}) {
    const auto p = make_params(n, s);
    const Bubble b(p);
    for (double r : {0.1, 0.7, 2.5, 9.0}) {
      auto D = [&](double h) {
        return (eval_profiles(p, 1.0 + h, r).U - eval_profiles(p, 1.0 - h, r).U) / (2.0 * h);
      };
      const double h = 1e-2;
      const double z = b.Z(r);
      const double e1 = std::abs(D(h) - z), e2 = std::abs(D(h / 2) - z);
      min_order = std::min(min_order, std::log2(e1 / e2));
      const double rich = (4.0 * D(h / 2) - D(h)) / 3.0;
      worst_rich = std::max(worst_rich, std::abs(rich - z) / std::abs(z));
    }
  }
  o.require(min_order >= 1.9, "difference order >= 2");
  o.require(worst_rich <= 1e-6, "Richardson value matches Z0");
  o.detail << "max pde residual " << worst << ", delta-derivative order " << min_order
           << ", Richardson rel error " << worst_rich;
  return o;
}

Outcome check_kernel() {
  Outcome o;
  for (auto [n, s] : {std::pair{7, 1.0}, std::pair{9, 0.5}}) {
    const auto p = make_params(n, s);
    const auto g = default_grid(p);
    auto g2 = g;
    g2.N *= 2;
    const auto k1 = kernel_diagnostics(p, g);
    const auto k2 = kernel_diagnostics(p, g2);
    const double drift = std::abs(k2.mode2_min_eig / k1.mode2_min_eig - 1.0);
    o.require(k1.mode0_near_zero_count == 1 && k2.mode0_near_zero_count == 1, "one near-zero eigenvalue");
    o.require(k1.mode0_eigvec_alignment_with_Z0 >= 0.999, "alignment >= 0.999");
    o.require(k1.mode2_min_eig > 0.0, "mode-2 minimum positive");
    o.require(drift <= 0.05, "mode-2 minimum stable");
    o.detail << "(n=" << n << ", s=" << s << "): near-zero " << k1.mode0_min_eig << ", alignment "
             << k1.mode0_eigvec_alignment_with_Z0 << ", mode-2 min " << k1.mode2_min_eig << " drift "
             << drift << "; ";
  }
  return o;
}

Outcome check_hat_c_solver() {
  Outcome o;
  const auto p = make_params(7, 1.0);
  const Bubble b(p);
  const auto g = default_grid(p);

  const RadialFunction vz = [&](double r) { return b.V(r) * b.Z(r); };
  const auto triv = solve_projected(p, vz, g);
  double scale = 0.0;
  for (double r : g.nodes()) scale = std::max(scale, std::abs(vz(r)));
  const double triv_ratio = sup_abs(triv.u) / scale;
  o.require(triv_ratio <= 1e-8, "trivial cancellation");

  const WDecomposition w{derive_constants(p).c_ns * 42.0, 2.0, 1.5};
  const auto h1 = hat_c(p, w, g);
  const auto h2 = hat_c(p, WDecomposition{2 * w.a, 2 * w.mode0_extra, 4 * w.t_free_norm2}, g);
  double lin = 0.0;
  const double s0 = sup_abs(h1.mode0.u);
  for (std::size_t i = 0; i < h1.mode0.u.size(); ++i)
    lin = std::max(lin, std::abs(h2.mode0.u[i] - 2.0 * h1.mode0.u[i]) / s0);
  const double quad = rel(h2.nonlocal_term, 4.0 * h1.nonlocal_term);
  o.require(lin <= 1e-6 && quad <= 1e-6, "linearity");

  const WDecomposition w1{0.8, -0.3, 2.0}, w2{-0.4, 1.1, 0.5};
  const double ti = 0.6;
  const double sym = rel(bilinear_pairing(p, w1, w2, ti, g), bilinear_pairing(p, w2, w1, ti, g));
  o.require(sym <= 1e-6, "bilinear symmetry");

  const double v1 = nonlocal_term(p, w, grid_with(p, 500));
  const double v2 = nonlocal_term(p, w, grid_with(p, 1000));
  const double v3 = nonlocal_term(p, w, grid_with(p, 2000));
  const double order = std::log2(std::abs(v1 - v2) / std::abs(v2 - v3));
  o.require(order >= 2.0, "Cauchy order >= 2");
  o.detail << "trivial |C|/scale " << triv_ratio << ", linearity " << std::max(lin, quad)
           << ", symmetry " << sym << ", Cauchy order " << order;
  return o;
}

Outcome check_geometry() {
  Outcome o;
  const auto p = make_params(7, 1.0);
  const auto d = density_coeffs(curvature_sphere(7, 1.0), 7);
  const double e2 = rel(d.c2, -1.0), e4 = rel(d.c4, 7.0 / 15.0);
  o.require(e2 <= 1e-10 && e4 <= 1e-10, "sphere density coefficients");
  const double k = kns(curvature_sphere(7, 1.0), p);
  o.require(rel(k, 98.0 / 11.0) <= 1e-12, "K = 98/11");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.0, 20.0), sd(0.1, 1.9);
  std::uniform_int_distribution<int> dim(7, 12);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto q = make_params(dim(rng), sd(rng));
    CurvatureData c;
    c.scal = 4.0 * u(rng);
    c.ric_norm2 = c.scal * c.scal / q.n + pos(rng);
    c.rm_norm2 = pos(rng);
    c.lap_scal = 10.0 * u(rng);
    const auto chk = collapse_identity(c, q);
    worst = std::max(worst, rel(chk.lhs, chk.rhs));
  }
  o.require(worst <= 1e-10, "collapse identity");
  o.detail << "(c2, c4) rel errors " << e2 << ", " << e4 << "; K = " << k << "; collapse identity max rel "
           << worst << " over 100 samples";
  return o;
}

Outcome check_energy() {
  Outcome o;
  const auto p = make_params(7, 1.0);
  RadialModel m;
  m.curvature = curvature_sphere(7, 1.0);
  m.jet.h0 = derive_constants(p).c_ns * 42.0;
  const auto fit = fit_expansion(m, p, parse_sweep("0.005:0.05:12"));
  const double c2_ratio = std::abs(fit.c2_fit) / std::abs(fit.c2_reference);
  o.require(c2_ratio <= 0.01, "|c2_fit| <= 1% of the generic reference");
  o.require(std::abs(fit.c4_fit - fit.c4_pred) <= 0.05 * std::abs(fit.c4_pred), "c4_fit within 5% of c4_pred");
  o.detail << "|c2_fit|/reference " << c2_ratio << ", c4_fit " << fit.c4_fit << " vs c4_pred " << fit.c4_pred
           << " (deviation " << std::abs(fit.c4_fit - fit.c4_pred) / std::abs(fit.c4_pred) << ")";
  return o;
}

Outcome check_remainder() {
  Outcome o;
  const auto p = make_params(7, 1.0);
  double worst = 0.0;
  for (const auto& [c, h0] : {std::pair{curvature_sphere(7, 1.0), derive_constants(p).c_ns * 42.0},
                              std::pair{CurvatureData{3.0, 4.0, 2.0, 0.0}, 0.7}}) {
    const auto rep = remainder_alpha(c, p, h0);
    for (double d : {0.1, 0.01, 0.001})
      worst = std::max(worst, rel(remainder_norm_at_scale(c, p, h0, d) / (d * d), rep.alpha_inv));
  }
  o.require(worst <= 1e-10, "delta^2 scaling");

  const Bubble b(p);
  const double q = 2.0 * p.n / (p.n + 2.0);
  RadialIntegrand in;
  in.f = [&](double r) { return std::pow(b.U(r), q); };
  in.power = p.n - 1.0;
  const double direct = std::pow(sphere_area(p.n - 1) * integrate_radial(in, {1e-13, 1000000}).value, 1.0 / q);
  const double flat = remainder_alpha(curvature_flat(), p, 1.0).alpha_inv;
  o.require(rel(flat, direct) <= 1e-8, "flat norm equals ||U1||");
  o.detail << "scaling max rel deviation " << worst << "; flat alpha_inv " << flat << " vs quadrature " << direct;
  return o;
}

Outcome check_ladder() {
  Outcome o;
  const auto p = make_params(7, 1.0);
  const double r4 = bubble_moment(p, MomentKind::r4grad);
  const auto lad = family_theorem2(LgBreakdown{}, p, -1.0, 50);
  int exact = 0;
  for (const auto& e : lad) exact += (e.shift == r4 / (2.0 * e.k) && e.lg_k == e.shift);
  o.require(exact == 50, "ladder shift exact for k = 1..50");

  const auto sph = curvature_sphere(7, 1.0);
  const double crit = derive_constants(p).c_ns * sph.scal;
  int right = 0;
  for (double hf : {0.9, 1.0, 1.1})
    for (double l : {1.0, 0.0, -1.0}) {
      LgBreakdown lg;
      lg.total = l;
      const auto v = verdict(PotentialJet{hf * crit, 0.0, 0.0}, sph, p, lg);
      Regime want = Regime::supercritical;
      if (hf < 1.0) want = Regime::subcritical_minimizing;
      else if (hf == 1.0) want = l == 0.0 ? Regime::critical_degenerate : Regime::critical_blowup_candidate;
      bool ok = v.regime == want;
      if (want == Regime::critical_blowup_candidate) ok = ok && v.required_f_sign == (l > 0 ? -1 : 1);
      right += ok;
    }
  o.require(right == 9, "verdict truth table");
  o.detail << exact << "/50 ladder shifts exact, " << right << "/9 verdict cases";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"moment-ratio suite", check_moment_ratios},
      {"Yamabe consistency", check_yamabe},
      {"PDE identities", check_pde_identities},
      {"kernel structure", check_kernel},
      {"hat C solver", check_hat_c_solver},
      {"geometry", check_geometry},
      {"energy expansion", check_energy},
      {"remainder scaling", check_remainder},
      {"ladder identity and verdict", check_ladder},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failed += std::string(" [exception: ") + e.what() + "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s): %s%s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str(), o.failed.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "hsb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hsb/errors.hpp"

namespace hsb {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr unsigned kMaxDepth = 30;
constexpr int kMinLevels = 6;
constexpr int kMaxLevels = 200;

// Wraps the user callable with an evaluation budget and a finiteness check.
class CountedFunction {
public:
  CountedFunction(const std::function<double(double)>& f, std::size_t budget)
      : f_(f), budget_(budget) {}

  double operator()(double x) {
    if (++count_ > budget_)
      throw NonConvergenceError("quadrature evaluation budget of " + std::to_string(budget_) +
                                " exhausted");
    const double v = f_(x);
    if (!std::isfinite(v))
      throw DivergenceError("integrand is not finite at r = " + std::to_string(x));
    return v;
  }

  std::size_t count() const { return count_; }

private:
  const std::function<double(double)>& f_;
  std::size_t budget_;
  std::size_t count_ = 0;
};

struct PanelSum {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;

  void add(const PanelSum& o) {
    value += o.value;
    error += o.error;
    l1 += o.l1;
  }
};

// Boost's adaptive driver compares an unscaled error estimate against a scaled
// tolerance, which over-refines very short panels; it is used here only as the
// non-adaptive (7,15) rule and the bisection is done locally.
template <class F>
PanelSum gk_rule(F& g, double a, double b) {
  PanelSum out;
  double err = 0.0, l1 = 0.0;
  out.value = GK::integrate(g, a, b, 0, 0.0, &err, &l1);
  out.error = err * 0.5 * (b - a);
  out.l1 = l1;
  return out;
}

// Bisection with an absolute error budget that halves with each split, so a
// panel containing a kink converges instead of chasing a relative target.
template <class F>
PanelSum adaptive(F& g, const PanelSum& whole, double a, double b, double abs_tol, unsigned depth) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * whole.l1;
  if (depth == 0 || whole.error <= std::max(abs_tol, floor)) return whole;
  const double mid = 0.5 * (a + b);
  const PanelSum left = gk_rule(g, a, mid);
  const PanelSum right = gk_rule(g, mid, b);
  PanelSum out = adaptive(g, left, a, mid, 0.5 * abs_tol, depth - 1);
  out.add(adaptive(g, right, mid, b, 0.5 * abs_tol, depth - 1));
  return out;
}

template <class F>
PanelSum panel(F&& g, double a, double b, double tol) {
  if (!(b > a)) return {};
  const PanelSum whole = gk_rule(g, a, b);
  return adaptive(g, whole, a, b, tol * whole.l1, kMaxDepth);
}

// Geometric ratio tail estimate for a sequence of level contributions that
// decays like a power of 2 per level.
double tail_estimate(double prev, double last) {
  const double a = std::abs(prev);
  const double b = std::abs(last);
  if (b == 0.0) return 0.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  const double rho = b / a;
  if (rho >= 0.95) return std::numeric_limits<double>::infinity();
  return b * rho / (1.0 - rho);
}

}  // namespace

QuadResult integrate_radial(const RadialIntegrand& in, const QuadOptions& opts) {
  if (!in.f) throw DomainError("radial integrand has no callable");
  if (!(in.power + in.sing > -1.0))
    throw DivergenceError("radial integrand is not integrable at r = 0 (power + sing <= -1)");
  if (!(in.upper > 0.0)) throw DomainError("radial integration domain must have upper > 0");

  CountedFunction f(in.f, opts.max_evaluations);
  const double power = in.power;
  auto weighted = [&](double r) {
    const double v = f(r);
    return power == 0.0 ? v : v * std::pow(r, power);
  };
  const double panel_tol = std::max(opts.tol * 0.1, 1e-15);

  PanelSum total;
  const bool infinite = std::isinf(in.upper);

  // Inner panels share a generator; in the infinite case they live in u = r/(1+r).
  auto inner_level = [&](int k) -> PanelSum {
    if (infinite) {
      auto g = [&](double u) {
        const double w = 1.0 - u;
        return weighted(u / w) / (w * w);
      };
      return panel(g, std::ldexp(1.0, -k - 3), std::ldexp(1.0, -k - 2), panel_tol);
    }
    return panel(weighted, in.upper * std::ldexp(1.0, -k - 1), in.upper * std::ldexp(1.0, -k),
                 panel_tol);
  };
  // Outer panels use v = 1 - u so that r = (1 - v)/v keeps full precision.
  auto outer_level = [&](int k) -> PanelSum {
    auto g = [&](double v) { return weighted((1.0 - v) / v) / (v * v); };
    return panel(g, std::ldexp(1.0, -k - 3), std::ldexp(1.0, -k - 2), panel_tol);
  };

  if (infinite) {
    auto g = [&](double u) {
      const double w = 1.0 - u;
      return weighted(u / w) / (w * w);
    };
    total.add(panel(g, 0.25, 0.75, panel_tol));
  }

  double inner_prev = 0.0, outer_prev = 0.0;
  double inner_tail = std::numeric_limits<double>::infinity();
  double outer_tail = infinite ? std::numeric_limits<double>::infinity() : 0.0;
  bool inner_done = false, outer_done = !infinite;

  for (int k = 0; k < kMaxLevels; ++k) {
    if (!inner_done) {
      const PanelSum p = inner_level(k);
      total.add(p);
      if (k > 0) inner_tail = tail_estimate(inner_prev, p.value);
      inner_prev = p.value;
    }
    if (!outer_done) {
      const PanelSum p = outer_level(k);
      total.add(p);
      if (k > 0) outer_tail = tail_estimate(outer_prev, p.value);
      outer_prev = p.value;
    }
    if (k + 1 >= kMinLevels) {
      const double scale = std::max(total.l1, std::abs(total.value));
      const double target = 0.01 * opts.tol * scale;
      if (inner_tail <= target || scale == 0.0) inner_done = true;
      if (outer_tail <= target || scale == 0.0) outer_done = true;
    }
    if (inner_done && outer_done) break;
  }

  const double tails = (std::isfinite(inner_tail) ? inner_tail : (inner_done ? 0.0 : inner_tail)) +
                       (std::isfinite(outer_tail) ? outer_tail : (outer_done ? 0.0 : outer_tail));
  QuadResult res;
  res.value = total.value;
  res.l1 = total.l1;
  res.evaluations = f.count();
  res.error_estimate = total.error + (std::isfinite(tails) ? tails : 0.0);
  if (!inner_done || !outer_done) {
    if (!std::isfinite(tails) || tails > opts.tol * std::max(total.l1, std::abs(total.value)))
      throw NonConvergenceError("radial quadrature did not converge within " +
                                std::to_string(kMaxLevels) + " geometric levels");
  }
  if (res.error_estimate > opts.tol * std::max(res.l1, std::abs(res.value)) &&
      res.error_estimate > 1e-300)
    throw NonConvergenceError("radial quadrature error estimate " +
                              std::to_string(res.error_estimate) + " exceeds tolerance");
  return res;
}

QuadResult integrate_interval(const std::function<double(double)>& fn, double a, double b,
                              const std::vector<double>& breakpoints, const QuadOptions& opts) {
  if (!fn) throw DomainError("interval integrand has no callable");
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate_interval needs a finite interval with a <= b");
  std::vector<double> pts{a};
  for (double x : breakpoints)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  CountedFunction f(fn, opts.max_evaluations);
  auto g = [&](double x) { return f(x); };
  const double panel_tol = std::max(opts.tol * 0.1, 1e-15);
  // The error budget is shared by all segments in proportion to the whole
  // integral, so a negligible sliver next to a breakpoint is not refined to
  // full relative accuracy on its own.
  std::vector<PanelSum> first(pts.size() - 1);
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) first[i] = gk_rule(g, pts[i], pts[i + 1]);
    l1 += first[i].l1;
  }
  const double seg_tol = panel_tol * l1 / static_cast<double>(first.size());
  PanelSum total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] > pts[i]) total.add(adaptive(g, first[i], pts[i], pts[i + 1], seg_tol, kMaxDepth));

  QuadResult res{total.value, total.error, total.l1, f.count()};
  if (res.error_estimate > opts.tol * std::max(res.l1, std::abs(res.value)) &&
      res.error_estimate > 1e-300)
    throw NonConvergenceError("interval quadrature error estimate exceeds tolerance");
  return res;
}

}  // namespace hsb

#include "hsb/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/SparseLU>

#include "hsb/errors.hpp"
#include "hsb/moments.hpp"
#include "hsb/quadrature.hpp"
#include "radial_operator.hpp"

namespace hsb {

using detail::RadialFem;

void validate(const WDecomposition& w) {
  if (!std::isfinite(w.a) || !std::isfinite(w.mode0_extra) || !std::isfinite(w.t_free_norm2))
    throw DomainError("W decomposition has non-finite entries");
  if (w.t_free_norm2 < 0.0) throw DomainError("trace-free Ricci norm must be non-negative");
}

double angular_quadrupole_factor(int n) { return 2.0 / (n * (n + 2.0)); }

namespace {

struct Solve {
  Eigen::VectorXd x;
  double multiplier = 0.0;
  double defect = 0.0;
};

// Solves (K - MV) x [+ lambda B] = F, with B^T x = 0 when B is given, after a
// symmetric diagonal scaling that evens out the r^(n-1) weight across rows.
Solve solve_system(const RadialFem& fem, const Eigen::VectorXd& F, const Eigen::VectorXd* B) {
  const Eigen::SparseMatrix<double> A = fem.operator_matrix();
  const int d = fem.dofs();
  Eigen::VectorXd sc(d);
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(fem.stiffness().coeff(i, i));
    sc(i) = a > 0.0 ? 1.0 / std::sqrt(a) : 1.0;
  }
  const int m = B ? d + 1 : d;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.nonZeros() + 2 * d);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), sc(it.row()) * it.value() * sc(it.col()));
  double bscale = 1.0;
  if (B) {
    const Eigen::VectorXd sb = sc.cwiseProduct(*B);
    bscale = sb.norm() > 0.0 ? 1.0 / sb.norm() : 1.0;
    for (int i = 0; i < d; ++i) {
      const double v = sb(i) * bscale;
      if (v == 0.0) continue;
      trip.emplace_back(i, d, v);
      trip.emplace_back(d, i, v);
    }
  }
  Eigen::SparseMatrix<double> M(m, m);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs.head(d) = sc.cwiseProduct(F);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success)
    throw NumericalError("mode operator is numerically singular (factorisation failed)");
  const Eigen::VectorXd y = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !y.allFinite())
    throw NumericalError("mode operator is numerically singular (solve failed)");

  Solve out;
  const double rn = rhs.norm();
  out.defect = rn > 0.0 ? (M * y - rhs).norm() / rn : 0.0;
  if (out.defect > 1e-6)
    throw NumericalError("mode operator is numerically singular (residual " +
                         std::to_string(out.defect) + ")");
  out.x = sc.cwiseProduct(y.head(d));
  if (B) out.multiplier = y(d) * bscale;
  return out;
}

double z0grad_radial(const HSParams& p) {
  return bubble_moment(p, MomentKind::z0grad) / sphere_area(p.n - 1);
}

struct ModeWork {
  std::unique_ptr<Bubble> bubble;
  std::unique_ptr<RadialFem> fem;
  Solve solve;
  ModeSolution sol;
};

ModeWork run_mode(const HSParams& p, int ell, const RadialFunction& rhs, const RadialGrid& grid,
                  bool check_solvability) {
  require_expansion_regime(p, "the linearised solver");
  if (ell != 0 && ell != 2) throw DomainError("only the angular modes ell = 0 and ell = 2 occur");
  ModeWork w;
  w.bubble = std::make_unique<Bubble>(p);
  const Bubble& b = *w.bubble;
  const double n = p.n;

  if (ell == 0 && check_solvability) {
    RadialIntegrand in;
    in.power = n - 1.0;
    in.sing = -p.s;
    QuadOptions opts;
    opts.tol = 1e-12;
    in.f = [&](double r) { return rhs(r) * b.Z(r); };
    const double num = integrate_radial(in, opts).value;
    in.f = [&](double r) { return std::abs(rhs(r) * b.Z(r)); };
    const double den = integrate_radial(in, opts).value;
    if (std::abs(num) > 1e-8 * den)
      throw SolvabilityError("ell = 0 right-hand side is not orthogonal to Z0 (relative " +
                             std::to_string(std::abs(num) / den) + ")");
  }

  w.fem = std::make_unique<RadialFem>(b, ell, grid, true);
  const RadialFem& fem = *w.fem;
  const Eigen::VectorXd F = fem.load(rhs);
  if (ell == 0) {
    const Eigen::VectorXd B = fem.load([&](double r) { return b.V(r) * b.Z(r); });
    w.solve = solve_system(fem, F, &B);
  } else {
    w.solve = solve_system(fem, F, nullptr);
  }

  w.sol.ell = ell;
  w.sol.r = fem.nodes();
  w.sol.u = fem.nodal_values(w.solve.x);
  w.sol.tail_coefficient = fem.tail_coefficient(w.solve.x);
  w.sol.multiplier = w.solve.multiplier;
  w.sol.defect = w.solve.defect;
  if (ell == 0) {
    const double g2 = fem.gradient_norm2(w.solve.x);
    const double pair = fem.gradient_pairing(w.solve.x, [&](double r) { return b.dZ(r); });
    const double scale = std::sqrt(std::max(g2, 0.0) * z0grad_radial(p));
    w.sol.z0_orthogonality = scale > 0.0 ? std::abs(pair) / scale : 0.0;
  }
  return w;
}

ModeSolution zero_mode(int ell, const RadialGrid& grid) {
  ModeSolution s;
  s.ell = ell;
  s.r = grid.nodes();
  s.u.assign(s.r.size(), 0.0);
  return s;
}

}  // namespace

ModeSolution solve_mode(const HSParams& p, int ell, const RadialFunction& rhs,
                        const RadialGrid& grid) {
  if (!rhs) throw DomainError("solve_mode needs a right-hand side");
  return run_mode(p, ell, rhs, grid, true).sol;
}

ModeSolution solve_projected(const HSParams& p, const RadialFunction& w, const RadialGrid& grid) {
  if (!w) throw DomainError("solve_projected needs a source");
  require_expansion_regime(p, "solve_projected");
  const Bubble b(p);
  RadialIntegrand in;
  in.power = p.n - 1.0;
  in.sing = -p.s;
  const QuadOptions opts{1e-12, 1000000};
  in.f = [&](double r) { return w(r) * b.Z(r); };
  const double wz = integrate_radial(in, opts).value;
  const double gam = wz / z0grad_radial(p);
  // Written as -(W - V Z0) + (gamma - 1) V Z0 so that a kernel-aligned source
  // cancels exactly instead of leaving rounding noise for the quadrature.
  auto rhs = [&](double r) {
    const double vz = b.V(r) * b.Z(r);
    return -(w(r) - vz) + (gam - 1.0) * vz;
  };
  in.f = [&](double r) { return b.V(r) * b.Z(r) * b.Z(r); };
  const double num = -wz + gam * integrate_radial(in, opts).value;
  in.f = [&](double r) { return std::abs(w(r) * b.Z(r)); };
  const double den = integrate_radial(in, opts).value;
  if (std::abs(num) > 1e-8 * den)
    throw SolvabilityError("projected right-hand side is not orthogonal to Z0 (relative " +
                           std::to_string(std::abs(num) / den) + ")");
  return run_mode(p, 0, rhs, grid, false).sol;
}

double w_z0_pairing(const HSParams& p, const WDecomposition& w) {
  validate(p);
  validate(w);
  const ConstantSet c = derive_constants(p);
  const double n = p.n;
  const double s = p.s;
  const double k = (n - 2.0) / (2.0 - s);
  const double m = (n - s) / (2.0 - s);
  const double A = 0.5 * (n - 2.0) * c.kappa;
  const double t1 = 2.0 - s;  // exponent of r in t
  // U1 Z0 = kappa A (t-1)(1+t)^(-(k+m)),  r U1' Z0 = -(n-2) kappa A t (t-1)(1+t)^(-2m)
  const double uz = c.kappa * A *
                    (radial_beta_integral(n - 1.0 + t1, k + m, s) -
                     radial_beta_integral(n - 1.0, k + m, s));
  const double rz = -(n - 2.0) * c.kappa * A *
                    (radial_beta_integral(n - 1.0 + 2.0 * t1, 2.0 * m, s) -
                     radial_beta_integral(n - 1.0 + t1, 2.0 * m, s));
  return sphere_area(p.n - 1) * (w.a * uz + w.mode0_extra * rz);
}

namespace {

struct HatCWork {
  ModeWork mode0;
  ModeWork mode2;
  bool has0 = false;
  bool has2 = false;
  double projection = 0.0;
};

HatCWork hat_c_work(const HSParams& p, const WDecomposition& w, const RadialGrid& grid,
                    bool need_mode2) {
  require_expansion_regime(p, "hat_c");
  validate(w);
  validate(grid);
  HatCWork out;
  out.projection = w_z0_pairing(p, w) / bubble_moment(p, MomentKind::z0grad);
  const Bubble b(p);
  if (w.a != 0.0 || w.mode0_extra != 0.0) {
    const double gam = out.projection;
    const double a = w.a, e = w.mode0_extra;
    auto rhs0 = [b, a, e, gam](double r) {
      return -(a * b.U(r) + e * b.rdU(r)) + gam * b.V(r) * b.Z(r);
    };
    out.mode0 = run_mode(p, 0, rhs0, grid, true);
    out.has0 = true;
  }
  if (need_mode2) {
    auto rhs2 = [b](double r) { return -b.rdU(r) / 3.0; };
    out.mode2 = run_mode(p, 2, rhs2, grid, false);
    out.has2 = true;
  }
  return out;
}

double mode0_pairing(const HatCWork& work, const Bubble& b, const WDecomposition& w1) {
  if (!work.has0 || (w1.a == 0.0 && w1.mode0_extra == 0.0)) return 0.0;
  const Eigen::VectorXd bw =
      work.mode0.fem->load([&](double r) { return w1.a * b.U(r) + w1.mode0_extra * b.rdU(r); });
  return bw.dot(work.mode0.solve.x);
}

double mode2_pairing(const HatCWork& work, const Bubble& b) {
  if (!work.has2) return 0.0;
  const Eigen::VectorXd bw = work.mode2.fem->load([&](double r) { return b.rdU(r) / 3.0; });
  return bw.dot(work.mode2.solve.x);
}

}  // namespace

HatC hat_c(const HSParams& p, const WDecomposition& w, const RadialGrid& grid) {
  HatCWork work = hat_c_work(p, w, grid, w.t_free_norm2 > 0.0);
  const Bubble b(p);
  const double omega = sphere_area(p.n - 1);
  HatC out;
  out.projection = work.projection;
  out.mode0 = work.has0 ? work.mode0.sol : zero_mode(0, grid);
  out.mode2 = work.has2 ? work.mode2.sol : zero_mode(2, grid);
  out.nonlocal_term = omega * mode0_pairing(work, b, w) +
                      omega * angular_quadrupole_factor(p.n) * w.t_free_norm2 * mode2_pairing(work, b);
  return out;
}

double nonlocal_term(const HSParams& p, const WDecomposition& w, const RadialGrid& grid) {
  return hat_c(p, w, grid).nonlocal_term;
}

double bilinear_pairing(const HSParams& p, const WDecomposition& w1, const WDecomposition& w2,
                        double t_inner, const RadialGrid& grid) {
  validate(w1);
  if (!std::isfinite(t_inner)) throw DomainError("trace-free contraction must be finite");
  HatCWork work = hat_c_work(p, w2, grid, t_inner != 0.0);
  const Bubble b(p);
  const double omega = sphere_area(p.n - 1);
  return omega * mode0_pairing(work, b, w1) +
         omega * angular_quadrupole_factor(p.n) * t_inner * mode2_pairing(work, b);
}

double beta_coefficient(const HSParams& p, const WDecomposition& w, double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  return alpha * w_z0_pairing(p, w) / bubble_moment(p, MomentKind::z0grad);
}

namespace {

// Generalised eigenvalues of the pencil (stiffness, V-mass), located by
// bisection on the banded inertia count.
struct Pencil {
  const RadialFem& fem;

  int count_below(double mu) const {
    return detail::count_eigenvalues_below(fem.stiffness(), fem.vmass(), fem.bandwidth(), mu);
  }

  // j-th smallest eigenvalue (1-based).
  double eigenvalue(int j, double lo) const {
    if (count_below(lo) >= j) throw NumericalError("eigenvalue lies below the search bracket");
    double hi = 2.0;
    for (int it = 0; count_below(hi) < j; ++it) {
      hi *= 2.0;
      if (it > 60) throw NumericalError("eigenvalue bracket search failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) >= j) hi = mid;
      else lo = mid;
    }
    return 0.5 * (lo + hi);
  }
};

}  // namespace

KernelDiagnostics kernel_diagnostics(const HSParams& p, const RadialGrid& grid,
                                     double near_zero_threshold) {
  require_expansion_regime(p, "kernel_diagnostics");
  validate(grid);
  const Bubble b(p);
  constexpr int kLowest = 4;
  // lambda >= -1.5 corresponds to mu = 1 + lambda >= -0.5, below the spectrum.
  constexpr double kMuFloor = -0.5;

  KernelDiagnostics out{};
  const RadialFem fem0(b, 0, grid, false);
  const Pencil pen0{fem0};
  for (int j = 1; j <= kLowest; ++j) out.mode0_lowest.push_back(pen0.eigenvalue(j, kMuFloor) - 1.0);
  const RadialFem fem2(b, 2, grid, false);
  const Pencil pen2{fem2};
  for (int j = 1; j <= kLowest; ++j) out.mode2_lowest.push_back(pen2.eigenvalue(j, kMuFloor) - 1.0);
  out.mode2_min_eig = out.mode2_lowest.front();

  std::size_t best = 0;
  for (std::size_t i = 0; i < out.mode0_lowest.size(); ++i) {
    if (std::abs(out.mode0_lowest[i]) < std::abs(out.mode0_lowest[best])) best = i;
    if (std::abs(out.mode0_lowest[i]) < near_zero_threshold) ++out.mode0_near_zero_count;
  }
  out.mode0_min_eig = out.mode0_lowest[best];

  // Inverse iteration for the eigenvector closest to the kernel, on the
  // Jacobi-scaled pencil so that the r^(n-1) weight does not swamp the solve.
  const double mu = out.mode0_min_eig + 1.0;
  const double sigma = mu - 1e-7 * std::max(1.0, std::abs(mu));
  const int d = fem0.dofs();
  Eigen::VectorXd sc(d);
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(fem0.stiffness().coeff(i, i));
    sc(i) = a > 0.0 ? 1.0 / std::sqrt(a) : 1.0;
  }
  Eigen::SparseMatrix<double> shifted = fem0.stiffness() - sigma * fem0.vmass();
  shifted = sc.asDiagonal() * shifted * sc.asDiagonal();
  shifted.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) throw NumericalError("inverse iteration factorisation failed");
  const Eigen::SparseMatrix<double>& M = fem0.vmass();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(d);
  for (int it = 0; it < 6; ++it) {
    x = sc.cwiseProduct(lu.solve(sc.cwiseProduct(M * x)));
    if (!x.allFinite()) throw NumericalError("inverse iteration diverged");
    x /= std::sqrt(x.dot(M * x));
  }
  const Eigen::VectorXd z = fem0.interpolate([&](double r) { return b.Z(r); });
  const double xz = x.dot(M * z);
  out.mode0_eigvec_alignment_with_Z0 = std::abs(xz) / std::sqrt(x.dot(M * x) * z.dot(M * z));
  return out;
}

}  // namespace hsb

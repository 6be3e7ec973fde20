#include "radial_operator.hpp"

#include <array>
#include <cmath>

#include "hsb/errors.hpp"
#include "hsb/quadrature.hpp"

namespace hsb::detail {
namespace {

// 8-point Gauss-Legendre on [-1, 1]; exact for the polynomial parts of every
// element integral up to n = 12 with quadratic elements.
constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267,
                                           -0.5255324099163290, -0.1834346424956498,
                                           0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745,
                                           0.3137066458778873, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

// Lagrange basis on the reference cell [-1, 1] with equispaced nodes.
struct Shape {
  std::array<double, 3> phi{};
  std::array<double, 3> dphi{};  // derivative in the reference coordinate
};

Shape shape(int degree, double xi) {
  Shape s;
  if (degree == 1) {
    s.phi = {0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0};
    s.dphi = {-0.5, 0.5, 0.0};
  } else {
    s.phi = {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
    s.dphi = {xi - 0.5, -2.0 * xi, xi + 0.5};
  }
  return s;
}

}  // namespace

RadialFem::RadialFem(const Bubble& b, int ell, const RadialGrid& grid, bool tail_dof, int degree)
    : b_(b), n_(b.params().n), ell_(ell), deg_(degree), tail_(tail_dof) {
  if (ell != 0 && ell != 2) throw DomainError("only the angular modes ell = 0 and ell = 2 occur");
  if (degree != 1 && degree != 2) throw DomainError("element degree must be 1 or 2");
  if (tail_dof && n_ < 7) throw DomainError("the exterior tail function needs n >= 7");
  validate(grid);
  r_ = grid.nodes();
  const int N = grid.N;
  const double n = n_;
  L_ = ell * (ell + n - 2.0);
  a_ = n - 2.0 + ell;
  first_ = ell == 0 ? 0 : 1;
  n_nodal_ = N * deg_ + 1 - first_;

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> tk, tm;
  const std::size_t per = static_cast<std::size_t>((deg_ + 1) * (deg_ + 1));
  tk.reserve(per * N + 8);
  tm.reserve(per * N + 8);

  for (int e = 0; e < N; ++e) {
    const double ri = r_[e], rj = r_[e + 1];
    const double h = rj - ri;
    double ke[3][3] = {}, me[3][3] = {};
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double x = ri + 0.5 * h * (1.0 + kGaussX[q]);
      const double w = 0.5 * h * kGaussW[q];
      const Shape s = shape(deg_, kGaussX[q]);
      const double rn = std::pow(x, n - 1.0);
      const double wg = w * rn * 4.0 / (h * h);
      const double wl = w * L_ * rn / (x * x);
      const double wv = w * b_.V(x) * rn;
      for (int A = 0; A <= deg_; ++A)
        for (int B = 0; B <= deg_; ++B) {
          ke[A][B] += wg * s.dphi[A] * s.dphi[B] + wl * s.phi[A] * s.phi[B];
          me[A][B] += wv * s.phi[A] * s.phi[B];
        }
    }
    for (int A = 0; A <= deg_; ++A)
      for (int B = 0; B <= deg_; ++B) {
        const int ia = dof_of(e * deg_ + A), ib = dof_of(e * deg_ + B);
        if (ia < 0 || ib < 0) continue;
        tk.emplace_back(ia, ib, ke[A][B]);
        tm.emplace_back(ia, ib, me[A][B]);
      }
  }

  // Exterior contributions. For e_al = (R/r)^al the potential-free form is
  // int (e_al' e_be' + L e_al e_be / r^2) r^(n-1) = (al be + L) R^(n-2) / (al + be - n + 2).
  const double R = r_[N];
  auto P = [&](double al, double be) {
    return (al * be + L_) * std::pow(R, n - 2.0) / (al + be - n + 2.0);
  };
  auto e = [R](double al) { return [R, al](double r) { return std::pow(R / r, al); }; };
  const int iN = dof_of(N * deg_);
  const auto ea = e(a_);
  tk.emplace_back(iN, iN, P(a_, a_));
  tm.emplace_back(iN, iN, exterior([&](double r) {
                    const double v = ea(r);
                    return b_.V(r) * v * v * std::pow(r, n - 1.0);
                  }));
  if (tail_) {
    const double c = n - 4.0;
    const int it = n_nodal_;
    const auto ec = e(c);
    auto psi = [&](double r) { return ec(r) - ea(r); };
    const double kNt = P(a_, c) - P(a_, a_);
    const double ktt = P(c, c) - 2.0 * P(a_, c) + P(a_, a_);
    tk.emplace_back(iN, it, kNt);
    tk.emplace_back(it, iN, kNt);
    tk.emplace_back(it, it, ktt);
    const double mNt =
        exterior([&](double r) { return b_.V(r) * ea(r) * psi(r) * std::pow(r, n - 1.0); });
    const double mtt = exterior([&](double r) {
      const double v = psi(r);
      return b_.V(r) * v * v * std::pow(r, n - 1.0);
    });
    tm.emplace_back(iN, it, mNt);
    tm.emplace_back(it, iN, mNt);
    tm.emplace_back(it, it, mtt);
  }

  K_.resize(dofs(), dofs());
  K_.setFromTriplets(tk.begin(), tk.end());
  MV_.resize(dofs(), dofs());
  MV_.setFromTriplets(tm.begin(), tm.end());
}

double RadialFem::node_position(int g) const {
  const int e = g / deg_;
  const int j = g % deg_;
  if (j == 0) return r_[e];
  return 0.5 * (r_[e] + r_[e + 1]);
}

double RadialFem::exterior(const Func& g) const {
  const double R = r_.back();
  QuadOptions opts;
  opts.tol = 1e-12;
  return integrate_interval([&](double x) { return g(R / x) * R / (x * x); }, 0.0, 1.0, {}, opts)
      .value;
}

Eigen::VectorXd RadialFem::load(const Func& f) const {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs());
  const int N = static_cast<int>(r_.size()) - 1;
  const double n = n_;
  for (int e = 0; e < N; ++e) {
    const double ri = r_[e], rj = r_[e + 1];
    const double h = rj - ri;
    double fe[3] = {0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double x = ri + 0.5 * h * (1.0 + kGaussX[q]);
      const double w = 0.5 * h * kGaussW[q] * f(x) * std::pow(x, n - 1.0);
      const Shape s = shape(deg_, kGaussX[q]);
      for (int A = 0; A <= deg_; ++A) fe[A] += w * s.phi[A];
    }
    for (int A = 0; A <= deg_; ++A) {
      const int id = dof_of(e * deg_ + A);
      if (id >= 0) F(id) += fe[A];
    }
  }
  const double R = r_.back();
  const double a = a_;
  F(dof_of(N * deg_)) +=
      exterior([&](double r) { return f(r) * std::pow(R / r, a) * std::pow(r, n - 1.0); });
  if (tail_) {
    F(n_nodal_) += exterior([&](double r) {
      return f(r) * (std::pow(R / r, n - 4.0) - std::pow(R / r, a)) * std::pow(r, n - 1.0);
    });
  }
  return F;
}

std::vector<double> RadialFem::nodal_values(const Eigen::VectorXd& x) const {
  std::vector<double> u(r_.size(), 0.0);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const int id = dof_of(static_cast<int>(i) * deg_);
    if (id >= 0) u[i] = x(id);
  }
  return u;
}

Eigen::VectorXd RadialFem::interpolate(const Func& g) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs());
  for (int j = 0; j < n_nodal_; ++j) x(j) = g(node_position(j + first_));
  return x;
}

double RadialFem::gradient_pairing(const Eigen::VectorXd& x, const Func& dg) const {
  const int N = static_cast<int>(r_.size()) - 1;
  const double n = n_;
  auto coef = [&](int g) {
    const int id = dof_of(g);
    return id >= 0 ? x(id) : 0.0;
  };
  double sum = 0.0;
  for (int e = 0; e < N; ++e) {
    const double ri = r_[e], rj = r_[e + 1];
    const double h = rj - ri;
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double xq = ri + 0.5 * h * (1.0 + kGaussX[q]);
      const Shape s = shape(deg_, kGaussX[q]);
      double du = 0.0;
      for (int A = 0; A <= deg_; ++A) du += coef(e * deg_ + A) * s.dphi[A] * 2.0 / h;
      sum += 0.5 * h * kGaussW[q] * du * dg(xq) * std::pow(xq, n - 1.0);
    }
  }
  const double R = r_.back();
  const double a = a_;
  const double cN = coef(N * deg_);
  const double ct = tail_coefficient(x);
  sum += exterior([&](double r) {
    const double dea = -a * std::pow(R / r, a) / r;
    const double dec = -(n - 4.0) * std::pow(R / r, n - 4.0) / r;
    return (cN * dea + ct * (dec - dea)) * dg(r) * std::pow(r, n - 1.0);
  });
  return sum;
}

double RadialFem::gradient_norm2(const Eigen::VectorXd& x) const {
  if (ell_ != 0) throw DomainError("gradient_norm2 is defined for the ell = 0 operator");
  return x.dot(K_ * x);
}

int count_eigenvalues_below(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                            int bw, double mu) {
  // Banded LDL^T without pivoting; Sylvester's law of inertia gives the count
  // from the signs of the pivots.
  const int d = static_cast<int>(K.rows());
  std::vector<double> band(static_cast<std::size_t>(d) * (bw + 1), 0.0);  // band[i*(bw+1)+k] = A(i, i-k)
  auto at = [&](int i, int k) -> double& { return band[static_cast<std::size_t>(i) * (bw + 1) + k]; };
  for (int c = 0; c < d; ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it)
      if (it.row() >= c && it.row() - c <= bw) at(static_cast<int>(it.row()), static_cast<int>(it.row()) - c) += it.value();
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      if (it.row() >= c && it.row() - c <= bw) at(static_cast<int>(it.row()), static_cast<int>(it.row()) - c) -= mu * it.value();
  }
  // In place: at(i,0) becomes D_i, at(i,k) becomes L(i, i-k).
  int negative = 0;
  for (int i = 0; i < d; ++i) {
    for (int k = bw; k >= 1; --k) {
      const int j = i - k;
      if (j < 0) continue;
      double v = at(i, k);
      for (int m = k + 1; m <= bw; ++m) {
        const int l = i - m;  // column shared by rows i and j
        if (l < 0) break;
        v -= at(i, m) * at(j, j - l) * at(l, 0);
      }
      at(i, k) = v / at(j, 0);
    }
    double dii = at(i, 0);
    for (int k = 1; k <= bw; ++k) {
      const int j = i - k;
      if (j < 0) break;
      dii -= at(i, k) * at(i, k) * at(j, 0);
    }
    if (dii == 0.0) dii = 1e-300;
    at(i, 0) = dii;
    if (dii < 0.0) ++negative;
  }
  return negative;
}

}  // namespace hsb::detail

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "hsb/bubble.hpp"

namespace hsb::detail {

// Continuous Lagrange finite elements (degree 1 or 2) for the one-mode operator
//
//   L_ell u = -u'' - (n-1)/r u' + ell(ell+n-2)/r^2 u - V u
//
// in L^2(r^(n-1) dr) on the graded grid. Degree-2 elements add the physical
// midpoint of every cell. Beyond the last node the final basis function
// continues as (R/r)^(n-2+ell), the decaying homogeneous solution of the
// potential-free operator. With `tail_dof` an extra exterior function
// (R/r)^(n-4) - (R/r)^(n-2+ell) carries the r^(4-n) decay of solutions whose
// source behaves like U1 at infinity.
class RadialFem {
public:
  using Func = std::function<double(double)>;

  RadialFem(const Bubble& b, int ell, const RadialGrid& grid, bool tail_dof, int degree = 2);

  int ell() const { return ell_; }
  int degree() const { return deg_; }
  int dofs() const { return n_nodal_ + (tail_ ? 1 : 0); }
  int nodal_dofs() const { return n_nodal_; }
  int bandwidth() const { return deg_; }
  bool has_tail() const { return tail_; }
  // Grid vertices r_0..r_N.
  const std::vector<double>& nodes() const { return r_; }

  // Gradient plus centrifugal part (symmetric positive definite).
  const Eigen::SparseMatrix<double>& stiffness() const { return K_; }
  // Consistent mass matrix with weight V r^(n-1).
  const Eigen::SparseMatrix<double>& vmass() const { return MV_; }
  Eigen::SparseMatrix<double> operator_matrix() const { return K_ - MV_; }

  // Load vector int f phi_j r^(n-1) dr over [0, inf).
  Eigen::VectorXd load(const Func& f) const;

  // Values at the grid vertices (zero at r = 0 when ell > 0).
  std::vector<double> nodal_values(const Eigen::VectorXd& x) const;

  double tail_coefficient(const Eigen::VectorXd& x) const { return tail_ ? x(n_nodal_) : 0.0; }

  // int u_h' g' r^(n-1) dr for a discrete u_h, and the squared gradient norm (ell = 0).
  double gradient_pairing(const Eigen::VectorXd& x, const Func& dg) const;
  double gradient_norm2(const Eigen::VectorXd& x) const;

  // Nodal interpolant of g (tail coefficient zero).
  Eigen::VectorXd interpolate(const Func& g) const;

private:
  double exterior(const Func& g) const;
  int dof_of(int global_node) const { return global_node - first_; }
  double node_position(int global_node) const;

  const Bubble& b_;
  int n_;
  int ell_;
  int deg_;
  double L_;  // ell (ell + n - 2)
  double a_;  // n - 2 + ell
  bool tail_;
  int first_;
  int n_nodal_;
  std::vector<double> r_;
  Eigen::SparseMatrix<double> K_;
  Eigen::SparseMatrix<double> MV_;
};

// Number of eigenvalues of the symmetric pencil (K, M) below mu, from the
// inertia of K - mu M. Both matrices must be banded with the given bandwidth
// and M positive definite.
int count_eigenvalues_below(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                            int bandwidth, double mu);

}  // namespace hsb::detail

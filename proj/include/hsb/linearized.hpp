#pragma once

#include <functional>
#include <vector>

#include "hsb/bubble.hpp"
#include "hsb/params.hpp"

namespace hsb {

/// W = a U1 + mode0_extra (r dU1/dr) + (1/3) T_ij s^i s^j (r dU1/dr), with T the
/// trace-free Ricci tensor at the point and s the unit direction. Only |T|^2
/// is needed for the quadratic form.
struct WDecomposition {
  double a = 0.0;
  double mode0_extra = 0.0;
  double t_free_norm2 = 0.0;
};

void validate(const WDecomposition& w);

struct ModeSolution {
  int ell = 0;
  std::vector<double> r;        // grid nodes
  std::vector<double> u;        // radial factor at the nodes
  double tail_coefficient = 0;  // weight of the exterior r^(4-n) function
  double multiplier = 0;        // Lagrange multiplier of the ell = 0 constraint
  double defect = 0;            // relative algebraic residual of the solve
  double z0_orthogonality = 0;  // |<u, Z0>_grad| / (|u|_grad |Z0|_grad), ell = 0 only
};

using RadialFunction = std::function<double(double)>;

/// Solves -u'' - (n-1)/r u' + ell(ell+n-2)/r^2 u - V u = rhs on (0, inf) for
/// ell in {0, 2}, regular at the origin and decaying at infinity. For ell = 0
/// the solution is constrained to be gradient-orthogonal to Z0, and rhs must
/// be L2-orthogonal to Z0 (SolvabilityError otherwise).
ModeSolution solve_mode(const HSParams& p, int ell, const RadialFunction& rhs,
                        const RadialGrid& grid);

/// Projected radial solve for a radial source W:
/// rhs = -W + (<W, Z0> / int |grad Z0|^2) V Z0, which is L2-orthogonal to Z0
/// because -Delta Z0 = V Z0. The solvability check is relative to int |W Z0|.
ModeSolution solve_projected(const HSParams& p, const RadialFunction& w, const RadialGrid& grid);

/// int W Z0 dX for the mode-0 part of W.
double w_z0_pairing(const HSParams& p, const WDecomposition& w);

struct HatC {
  ModeSolution mode0;
  ModeSolution mode2;    // per unit trace-free amplitude; zero when |T| = 0
  double projection;     // <W, Z0> / int |grad Z0|^2
  double nonlocal_term;  // int W hat C(W) dX
};

/// The correction hat C(W) in modes 0 and 2 together with int W hat C(W).
HatC hat_c(const HSParams& p, const WDecomposition& w, const RadialGrid& grid);

double nonlocal_term(const HSParams& p, const WDecomposition& w, const RadialGrid& grid);

/// int W1 hat C(W2) dX. `t_inner` is the contraction T1 : T2 of the two
/// trace-free tensors (equal to |T|^2 when W1 = W2).
double bilinear_pairing(const HSParams& p, const WDecomposition& w1, const WDecomposition& w2,
                        double t_inner, const RadialGrid& grid);

struct KernelDiagnostics {
  double mode0_min_eig;                  // eigenvalue of smallest magnitude
  double mode0_eigvec_alignment_with_Z0;
  double mode2_min_eig;                  // lowest eigenvalue
  int mode0_near_zero_count;
  std::vector<double> mode0_lowest;
  std::vector<double> mode2_lowest;
};

/// Eigenvalues lambda of L_ell x = lambda V x (equivalently -Delta x = (1+lambda) V x),
/// for which Z0 gives lambda = 0 in mode 0.
KernelDiagnostics kernel_diagnostics(const HSParams& p, const RadialGrid& grid,
                                     double near_zero_threshold = 1e-3);

/// beta = alpha <W, Z0> / int |grad Z0|^2.
double beta_coefficient(const HSParams& p, const WDecomposition& w, double alpha);

/// int_{S^(n-1)} (T_ij s^i s^j)^2 ds / (omega_(n-1) |T|^2) for trace-free T.
double angular_quadrupole_factor(int n);

}  // namespace hsb

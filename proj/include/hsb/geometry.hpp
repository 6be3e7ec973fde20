#pragma once

#include <string>

#include "hsb/bubble.hpp"
#include "hsb/linearized.hpp"
#include "hsb/params.hpp"

namespace hsb {

/// Curvature invariants at the concentration point. Laplacians use the
/// minus-divergence convention (positive operator).
struct CurvatureData {
  double scal = 0.0;
  double ric_norm2 = 0.0;
  double rm_norm2 = 0.0;
  double lap_scal = 0.0;

  /// |Ric - (Scal/n) g|^2 = |Ric|^2 - Scal^2/n.
  double tfree_ric_norm2(int n) const;
};

/// Potential 2-jet at the point plus the perturbation direction f(x0).
struct PotentialJet {
  double h0 = 0.0;
  double lap_h = 0.0;
  double f0 = 0.0;
};

/// Sign convention of Laplacian values read from user input. `analyst` means
/// Delta = +div grad; such values are negated on ingestion.
enum class LaplacianConvention { minus_divergence, analyst };

LaplacianConvention convention_from_name(const std::string& name);

/// Checks finiteness, |Rm|^2 >= 0 and |Ric|^2 >= Scal^2/n (up to rounding).
void validate(const CurvatureData& c, int n);
void validate(const PotentialJet& j);

CurvatureData curvature_flat();
/// Round sphere of radius R in dimension n.
CurvatureData curvature_sphere(int n, double R);
/// "flat", "sphere:R", or the path of a JSON file with keys
/// scal, ric_norm2, rm_norm2, lap_scal.
CurvatureData curvature_preset(const std::string& spec, int n,
                               LaplacianConvention conv = LaplacianConvention::minus_divergence);
CurvatureData curvature_from_json_text(const std::string& text, int n,
                                       LaplacianConvention conv = LaplacianConvention::minus_divergence);

/// JSON file with keys h0, lap_h and optionally f0.
PotentialJet potential_from_file(const std::string& path,
                                 LaplacianConvention conv = LaplacianConvention::minus_divergence);
PotentialJet potential_from_json_text(const std::string& text,
                                      LaplacianConvention conv = LaplacianConvention::minus_divergence);

/// Truncated spherical volume density G(r) = 1 + c2 r^2 + c4 r^4.
struct DensityCoeffs {
  double c2;
  double c4;
  double G(double r) const { return 1.0 + c2 * r * r + c4 * r * r * r * r; }
};

/// c2 = -Scal/(6n), c4 = (18 Delta Scal + 8|Ric|^2 - 3|Rm|^2 + 5 Scal^2) / (360 n (n+2)).
DensityCoeffs density_coeffs(const CurvatureData& c, int n);

/// K = (Lambda/18) (8|Ric|^2 - 3|Rm|^2 - 5(2-s)/(10-s) Scal^2).
double kns(const CurvatureData& c, const HSParams& p);

/// Both sides of the algebraic identity
///   (1/3) Scal (c Scal) - c4 n(n+2)(n-2)(10-s)/(2n-2-s) = -Lambda Delta Scal - K.
struct CollapseCheck {
  double lhs;
  double rhs;
};
CollapseCheck collapse_identity(const CurvatureData& c, const HSParams& p);

/// W amplitude a on U1, Scal/(3n) on r dU1/dr and the trace-free norm.
WDecomposition assemble_w(const CurvatureData& c, const HSParams& p, double a);

/// Moment multiplying the local bracket of L_g. `r4grad` is int |X|^4 |grad U1|^2;
/// `r2mass` is int |X|^2 U1^2, the moment produced by expanding the energy of
/// the bubble on the radial model.
enum class LocalMoment { r4grad, r2mass };

LocalMoment local_moment_from_name(const std::string& name);
const char* local_moment_name(LocalMoment m);
double local_moment_value(const HSParams& p, LocalMoment m);

struct LgBreakdown {
  double local_term = 0.0;
  double nonlocal_term = 0.0;
  double total = 0.0;
  double moment = 0.0;  // value of the local moment used
};

/// local = -(1/(4n)) (Delta h - Lambda Delta Scal - K) * moment,
/// nonlocal = -(1/2) int W hat C(W) with W built from a = c_ns Scal.
LgBreakdown lg_total(const CurvatureData& c, const PotentialJet& jet, const HSParams& p,
                     const RadialGrid& grid, LocalMoment moment = LocalMoment::r4grad);

}  // namespace hsb

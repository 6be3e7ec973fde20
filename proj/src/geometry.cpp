#include "hsb/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hsb/errors.hpp"
#include "hsb/moments.hpp"

namespace hsb {

double CurvatureData::tfree_ric_norm2(int n) const {
  const double t = ric_norm2 - scal * scal / n;
  // Cancellation can leave a tiny negative value for pure-trace Ricci.
  return t < 0.0 ? 0.0 : t;
}

LaplacianConvention convention_from_name(const std::string& name) {
  if (name == "minus-divergence" || name == "minus_divergence" || name == "minus")
    return LaplacianConvention::minus_divergence;
  if (name == "analyst" || name == "plus") return LaplacianConvention::analyst;
  throw DomainError("unknown Laplacian convention '" + name + "' (use minus-divergence or analyst)");
}

void validate(const CurvatureData& c, int n) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  if (!std::isfinite(c.scal) || !std::isfinite(c.ric_norm2) || !std::isfinite(c.rm_norm2) ||
      !std::isfinite(c.lap_scal))
    throw DomainError("curvature data must be finite");
  if (c.rm_norm2 < 0.0) throw DomainError("|Rm|^2 must be non-negative");
  const double floor = c.scal * c.scal / n;
  if (c.ric_norm2 < floor - 1e-12 * std::max(1.0, floor))
    throw DomainError("curvature data violates |Ric|^2 >= Scal^2/n (" + std::to_string(c.ric_norm2) +
                      " < " + std::to_string(floor) + ")");
}

void validate(const PotentialJet& j) {
  if (!std::isfinite(j.h0) || !std::isfinite(j.lap_h) || !std::isfinite(j.f0))
    throw DomainError("potential jet must be finite");
}

CurvatureData curvature_flat() { return {}; }

CurvatureData curvature_sphere(int n, double R) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("sphere radius must be positive");
  const double R2 = R * R;
  CurvatureData c;
  c.scal = n * (n - 1.0) / R2;
  c.ric_norm2 = n * (n - 1.0) * (n - 1.0) / (R2 * R2);
  c.rm_norm2 = 2.0 * n * (n - 1.0) / (R2 * R2);
  c.lap_scal = 0.0;
  return c;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double required_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing required key '") + key + "'");
  if (!j.at(key).is_number()) throw DomainError(std::string("key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw DomainError("unknown key '" + it.key() + "'");
  }
}

nlohmann::json parse_object(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("expected a JSON object");
  return j;
}

}  // namespace

CurvatureData curvature_from_json_text(const std::string& text, int n, LaplacianConvention conv) {
  const nlohmann::json j = parse_object(text);
  reject_unknown(j, {"scal", "ric_norm2", "rm_norm2", "lap_scal"});
  CurvatureData c;
  c.scal = required_number(j, "scal");
  c.ric_norm2 = required_number(j, "ric_norm2");
  c.rm_norm2 = required_number(j, "rm_norm2");
  c.lap_scal = required_number(j, "lap_scal");
  if (conv == LaplacianConvention::analyst) c.lap_scal = -c.lap_scal;
  validate(c, n);
  return c;
}

CurvatureData curvature_preset(const std::string& spec, int n, LaplacianConvention conv) {
  if (spec == "flat") return curvature_flat();
  if (spec.rfind("sphere:", 0) == 0) {
    const std::string arg = spec.substr(7);
    std::size_t used = 0;
    double R = 0.0;
    try {
      R = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw DomainError("cannot parse sphere radius '" + arg + "'");
    }
    if (used != arg.size()) throw DomainError("cannot parse sphere radius '" + arg + "'");
    return curvature_sphere(n, R);
  }
  return curvature_from_json_text(read_file(spec), n, conv);
}

PotentialJet potential_from_json_text(const std::string& text, LaplacianConvention conv) {
  const nlohmann::json j = parse_object(text);
  reject_unknown(j, {"h0", "lap_h", "f0"});
  PotentialJet p;
  p.h0 = required_number(j, "h0");
  p.lap_h = required_number(j, "lap_h");
  p.f0 = j.contains("f0") ? required_number(j, "f0") : 0.0;
  if (conv == LaplacianConvention::analyst) p.lap_h = -p.lap_h;
  validate(p);
  return p;
}

PotentialJet potential_from_file(const std::string& path, LaplacianConvention conv) {
  return potential_from_json_text(read_file(path), conv);
}

DensityCoeffs density_coeffs(const CurvatureData& c, int n) {
  validate(c, n);
  const double S = c.scal;
  DensityCoeffs d;
  d.c2 = -S / (6.0 * n);
  d.c4 = (18.0 * c.lap_scal + 8.0 * c.ric_norm2 - 3.0 * c.rm_norm2 + 5.0 * S * S) /
         (360.0 * n * (n + 2.0));
  return d;
}

double kns(const CurvatureData& c, const HSParams& p) {
  validate(p);
  validate(c, p.n);
  const ConstantSet k = derive_constants(p);
  const double s = p.s;
  return k.lambda_ns / 18.0 *
         (8.0 * c.ric_norm2 - 3.0 * c.rm_norm2 - 5.0 * (2.0 - s) / (10.0 - s) * c.scal * c.scal);
}

CollapseCheck collapse_identity(const CurvatureData& c, const HSParams& p) {
  const ConstantSet k = derive_constants(p);
  const double n = p.n;
  const double s = p.s;
  const double F = density_coeffs(c, p.n).c4;
  CollapseCheck out;
  out.lhs = c.scal * (k.c_ns * c.scal) / 3.0 -
            F * n * (n + 2.0) * (n - 2.0) * (10.0 - s) / (2.0 * n - 2.0 - s);
  out.rhs = -k.lambda_ns * c.lap_scal - kns(c, p);
  return out;
}

WDecomposition assemble_w(const CurvatureData& c, const HSParams& p, double a) {
  validate(p);
  validate(c, p.n);
  if (!std::isfinite(a)) throw DomainError("W amplitude must be finite");
  WDecomposition w;
  w.a = a;
  w.mode0_extra = c.scal / (3.0 * p.n);
  w.t_free_norm2 = c.tfree_ric_norm2(p.n);
  return w;
}

LocalMoment local_moment_from_name(const std::string& name) {
  if (name == "r4grad") return LocalMoment::r4grad;
  if (name == "r2mass") return LocalMoment::r2mass;
  throw DomainError("unknown local moment '" + name + "' (use r4grad or r2mass)");
}

const char* local_moment_name(LocalMoment m) {
  return m == LocalMoment::r4grad ? "r4grad" : "r2mass";
}

double local_moment_value(const HSParams& p, LocalMoment m) {
  return bubble_moment(p, m == LocalMoment::r4grad ? MomentKind::r4grad : MomentKind::r2mass);
}

LgBreakdown lg_total(const CurvatureData& c, const PotentialJet& jet, const HSParams& p,
                     const RadialGrid& grid, LocalMoment moment) {
  require_expansion_regime(p, "lg_total");
  validate(c, p.n);
  validate(jet);
  const ConstantSet k = derive_constants(p);
  LgBreakdown out;
  out.moment = local_moment_value(p, moment);
  out.local_term =
      -(jet.lap_h - k.lambda_ns * c.lap_scal - kns(c, p)) * out.moment / (4.0 * p.n);
  const WDecomposition w = assemble_w(c, p, k.c_ns * c.scal);
  if (w.a != 0.0 || w.mode0_extra != 0.0 || w.t_free_norm2 != 0.0)
    out.nonlocal_term = -0.5 * nonlocal_term(p, w, grid);
  out.total = out.local_term + out.nonlocal_term;
  return out;
}

}  // namespace hsb

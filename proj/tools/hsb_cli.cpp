// Command-line driver over the C API. Every subcommand builds one JSON report
// that echoes its inputs; the report is printed as JSON or as aligned text,
// and tabular parts can additionally be written as CSV.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hsb/hsb.h"

using json = nlohmann::ordered_json;

namespace {

// Carries a failed status out of a subcommand.
struct ApiError {
  hsb_status status;
  std::string message;
};

void check(hsb_status st) {
  if (st != HSB_OK) throw ApiError{st, hsb_last_error()};
}

struct ContextDeleter {
  void operator()(hsb_context* c) const { hsb_context_destroy(c); }
};
using ContextPtr = std::unique_ptr<hsb_context, ContextDeleter>;

struct ChatDeleter {
  void operator()(hsb_chat_result* r) const { hsb_chat_destroy(r); }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::string> labels;  // optional first column
  std::vector<std::vector<double>> rows;
};

struct Options {
  int n = 7;
  double s = 1.0;
  bool json_out = false;
  std::string csv_path;
  std::string output_path;
  std::string convention = "minus-divergence";
  std::string local_moment = "r4grad";
  std::string grid;
  std::string curvature = "flat";
  std::string potential;
  std::optional<double> h0, lap_h, f0;
  bool critical = false;

  // Subcommand-specific values.
  double delta = 1.0;
  std::string emit_profile;
  std::string deltas = "0.005:0.05:12";
  double r0 = 1.0;
  std::string scales = "0.1,0.01,0.001";
  double quad = 0.0, quartic = 0.0;
  std::optional<double> eps;
  int k_max = 10;
  std::optional<double> lg_value;
  double threshold = 1e-3;

  bool analyst() const { return convention == "analyst"; }
};

hsb_convention convention_of(const std::string& name) {
  if (name == "minus-divergence") return HSB_CONVENTION_MINUS_DIVERGENCE;
  if (name == "analyst") return HSB_CONVENTION_ANALYST;
  throw ApiError{HSB_ERR_INVALID_ARGUMENT, "unknown convention '" + name + "'"};
}

hsb_local_moment moment_of(const std::string& name) {
  if (name == "r4grad") return HSB_MOMENT_R4GRAD;
  if (name == "r2mass") return HSB_MOMENT_R2MASS;
  throw ApiError{HSB_ERR_INVALID_ARGUMENT, "unknown local moment '" + name + "'"};
}

std::vector<double> split_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw ApiError{HSB_ERR_INVALID_ARGUMENT, "malformed number '" + item + "' in '" + text + "'"};
    out.push_back(v);
  }
  return out;
}

// Best small-denominator fraction equal to x up to rounding, or "".
std::string as_fraction(double x) {
  if (!std::isfinite(x)) return "";
  for (long long den = 1; den <= 100000; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(num) > 1e15) break;
    if (std::abs(num / static_cast<double>(den) - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
      const long long ni = static_cast<long long>(num);
      return den == 1 ? std::to_string(ni) : std::to_string(ni) + "/" + std::to_string(den);
    }
  }
  return "";
}

class Runner {
public:
  explicit Runner(const Options& o) : o_(o) {}

  json base(const char* command) const {
    json r;
    r["command"] = command;
    r["version"] = hsb_version();
    r["inputs"] = {{"n", o_.n}, {"s", o_.s}};
    return r;
  }

  ContextPtr context(json& inputs, bool with_geometry, bool uses_grid = true) const {
    hsb_context* raw = nullptr;
    check(hsb_context_create(o_.n, o_.s, &raw));
    ContextPtr ctx(raw);
    if (!o_.grid.empty()) {
      const auto g = split_numbers(o_.grid, ',');
      if (g.size() != 3 || g[0] != std::floor(g[0]))
        throw ApiError{HSB_ERR_INVALID_ARGUMENT, "--grid expects N,Rmax,gamma"};
      const hsb_grid grid{g[1], static_cast<int>(g[0]), g[2]};
      check(hsb_context_set_grid(ctx.get(), &grid));
    }
    hsb_grid grid{};
    check(hsb_context_grid(ctx.get(), &grid));
    if (uses_grid) inputs["grid"] = {{"N", grid.n_cells}, {"r_max", grid.r_max}, {"gamma", grid.gamma}};
    if (!with_geometry) return ctx;

    const hsb_convention conv = convention_of(o_.convention);
    hsb_curvature c{};
    check(hsb_curvature_load(o_.curvature.c_str(), o_.n, conv, &c));
    check(hsb_context_set_curvature(ctx.get(), &c));

    hsb_potential jet{0.0, 0.0, 0.0};
    if (!o_.potential.empty()) check(hsb_potential_load(o_.potential.c_str(), conv, &jet));
    if (o_.critical) {
      hsb_constants k{};
      check(hsb_constants_get(ctx.get(), &k));
      jet.h0 = k.c_ns * c.scal;
    }
    if (o_.h0) jet.h0 = *o_.h0;
    if (o_.lap_h) jet.lap_h = o_.analyst() ? -*o_.lap_h : *o_.lap_h;
    if (o_.f0) jet.f0 = *o_.f0;
    check(hsb_context_set_potential(ctx.get(), &jet));

    // Echo the values actually used (minus-divergence convention), so that a
    // rerun from a file holding them reproduces the report.
    inputs["curvature_spec"] = o_.curvature;
    inputs["convention"] = o_.convention;
    inputs["curvature"] = {{"scal", c.scal},
                           {"ric_norm2", c.ric_norm2},
                           {"rm_norm2", c.rm_norm2},
                           {"lap_scal", c.lap_scal}};
    inputs["potential"] = {{"h0", jet.h0}, {"lap_h", jet.lap_h}, {"f0", jet.f0}};
    return ctx;
  }

  json constants() const {
    json r = base("constants");
    auto ctx = context(r["inputs"], false, false);
    hsb_constants k{};
    check(hsb_constants_get(ctx.get(), &k));
    hsb_yamabe_report y{};
    check(hsb_yamabe(o_.n, &y));
    auto frac = [](hsb_rational q) { return std::to_string(q.num) + "/" + std::to_string(q.den); };
    r["results"] = {{"crit_exp", k.crit_exp},
                    {"kappa", k.kappa},
                    {"c_ns", k.c_ns},
                    {"lambda_ns", k.lambda_ns},
                    {"kappa_pow", k.kappa_pow},
                    {"yamabe",
                     {{"c_at_0", frac(y.c_at_0)},
                      {"lambda_at_0", frac(y.lambda_at_0)},
                      {"yamabe", frac(y.yamabe)},
                      {"consistent", y.consistent != 0}}}};
    return r;
  }

  json integrals(Table& table) const {
    json r = base("integrals");
    auto ctx = context(r["inputs"], false, false);
    hsb_ratio_row rows[HSB_IDENTITY_ROWS];
    double worst = 0.0;
    check(hsb_identity_report(ctx.get(), rows, &worst));
    json arr = json::array();
    table.header = {"name", "quadrature", "closed_form", "abs_residual", "rel_residual"};
    for (const auto& row : rows) {
      arr.push_back({{"name", row.name},
                     {"quadrature", row.quadrature},
                     {"closed_form", row.closed_form},
                     {"exact", as_fraction(row.closed_form)},
                     {"abs_residual", row.abs_residual},
                     {"rel_residual", row.rel_residual}});
      table.labels.push_back(row.name);
      table.rows.push_back({row.quadrature, row.closed_form, row.abs_residual, row.rel_residual});
    }
    r["results"] = {{"rows", arr}, {"max_rel_residual", worst}};
    return r;
  }

  json bubble(Table& table) const {
    json r = base("bubble");
    auto ctx = context(r["inputs"], false);
    r["inputs"]["delta"] = o_.delta;
    double ru = 0.0, rz = 0.0, fu = 0.0, fz = 0.0;
    check(hsb_pde_residual(ctx.get(), 0, &ru, &rz));
    check(hsb_pde_residual(ctx.get(), 1, &fu, &fz));
    hsb_grid grid{};
    check(hsb_context_grid(ctx.get(), &grid));
    table.header = {"r", "U", "dr_U", "ddelta_U", "Z"};
    for (int i = 0; i <= grid.n_cells; ++i) {
      const double x = grid.r_max * std::pow(static_cast<double>(i) / grid.n_cells, grid.gamma);
      hsb_profile_point pp{};
      check(hsb_eval_profiles(ctx.get(), o_.delta, x, &pp));
      table.rows.push_back({x, pp.u, pp.dr_u, pp.ddelta_u, pp.z});
    }
    hsb_profile_point at0{};
    check(hsb_eval_profiles(ctx.get(), o_.delta, 0.0, &at0));
    r["results"] = {{"U_at_origin", at0.u},
                    {"pde_residual_analytic", {{"U", ru}, {"Z", rz}}},
                    {"pde_residual_fd4", {{"U", fu}, {"Z", fz}}},
                    {"profile_points", table.rows.size()}};
    return r;
  }

  json chat(Table& table) const {
    json r = base("chat");
    auto ctx = context(r["inputs"], true);
    hsb_potential jet{};
    check(hsb_context_potential(ctx.get(), &jet));
    hsb_w w{};
    check(hsb_assemble_w(ctx.get(), jet.h0, &w));
    hsb_chat_result* raw = nullptr;
    check(hsb_hat_c(ctx.get(), &w, &raw));
    std::unique_ptr<hsb_chat_result, ChatDeleter> res(raw);
    json modes = json::object();
    std::vector<std::vector<double>> profiles;
    std::vector<double> nodes;
    for (int ell : {0, 2}) {
      hsb_mode_info info{};
      check(hsb_chat_mode_info(res.get(), ell, &info));
      modes["mode" + std::to_string(ell)] = {{"tail_coefficient", info.tail_coefficient},
                                             {"multiplier", info.multiplier},
                                             {"defect", info.defect},
                                             {"z0_orthogonality", info.z0_orthogonality}};
      std::vector<double> rr(info.size), uu(info.size);
      check(hsb_chat_mode_profile(res.get(), ell, rr.data(), uu.data(), info.size));
      if (nodes.empty()) nodes = rr;
      profiles.push_back(uu);
    }
    table.header = {"r", "u0", "u2"};
    for (std::size_t i = 0; i < nodes.size(); ++i)
      table.rows.push_back({nodes[i], profiles[0][i], i < profiles[1].size() ? profiles[1][i] : 0.0});
    r["results"] = {{"w", {{"a", w.a}, {"mode0_extra", w.mode0_extra}, {"t_free_norm2", w.t_free_norm2}}},
                    {"projection", hsb_chat_projection(res.get())},
                    {"nonlocal_term", hsb_chat_nonlocal_term(res.get())},
                    {"modes", modes}};
    return r;
  }

  json lg() const {
    json r = base("lg");
    auto ctx = context(r["inputs"], true);
    r["inputs"]["local_moment"] = o_.local_moment;
    hsb_lg lg{};
    check(hsb_lg_total(ctx.get(), moment_of(o_.local_moment), &lg));
    double c2 = 0.0, c4 = 0.0, k = 0.0, lhs = 0.0, rhs = 0.0;
    check(hsb_density_coeffs(ctx.get(), &c2, &c4));
    check(hsb_kns(ctx.get(), &k));
    check(hsb_collapse_identity(ctx.get(), &lhs, &rhs));
    r["results"] = {{"local_term", lg.local_term},
                    {"nonlocal_term", lg.nonlocal_term},
                    {"total", lg.total},
                    {"moment", lg.moment},
                    {"density", {{"c2", c2}, {"c4", c4}}},
                    {"kns", k},
                    {"collapse_identity", {{"lhs", lhs}, {"rhs", rhs}}}};
    return r;
  }

  json energy(Table& table) const {
    json r = base("energy");
    auto ctx = context(r["inputs"], true);
    r["inputs"]["deltas"] = o_.deltas;
    r["inputs"]["r0"] = o_.r0;
    std::size_t count = 0;
    check(hsb_parse_sweep(o_.deltas.c_str(), nullptr, 0, &count));
    std::vector<double> d(count), values(count), residuals(count);
    check(hsb_parse_sweep(o_.deltas.c_str(), d.data(), d.size(), &count));
    hsb_fit_summary f{};
    check(hsb_energy_fit(ctx.get(), o_.r0, d.data(), d.size(), &f, values.data(), residuals.data()));
    auto co = [](const hsb_coeffs& c) { return json{{"c0", c.c0}, {"c2", c.c2}, {"c4", c.c4}}; };
    table.header = {"delta", "J", "residual"};
    for (std::size_t i = 0; i < d.size(); ++i) table.rows.push_back({d[i], values[i], residuals[i]});
    r["results"] = {{"fit", co(f.fit)},
                    {"standard_error", co(f.standard_error)},
                    {"predicted", co(f.predicted)},
                    {"c4_pred_r4grad", f.c4_pred_r4grad},
                    {"rel_dev", co(f.rel_dev)},
                    {"c2_reference", f.c2_reference},
                    {"c2_fraction_of_reference", std::abs(f.fit.c2) / std::abs(f.c2_reference)},
                    {"deltas", d},
                    {"values", values},
                    {"residuals", residuals}};
    return r;
  }

  json remainder(Table& table) const {
    json r = base("remainder");
    auto ctx = context(r["inputs"], true);
    r["inputs"]["scales"] = o_.scales;
    hsb_potential jet{};
    check(hsb_context_potential(ctx.get(), &jet));
    hsb_remainder_report rep{};
    check(hsb_remainder(ctx.get(), jet.h0, &rep));
    double lp = 0.0;
    check(hsb_bubble_lp_norm(ctx.get(), &lp));
    json scaling = json::array();
    table.header = {"delta", "norm", "norm_over_delta2", "rel_dev"};
    double worst = 0.0;
    for (double delta : split_numbers(o_.scales, ',')) {
      double norm = 0.0;
      check(hsb_remainder_at_scale(ctx.get(), jet.h0, delta, &norm));
      const double ratio = norm / (delta * delta);
      const double dev = rep.alpha_inv != 0.0 ? std::abs(ratio - rep.alpha_inv) / rep.alpha_inv
                                              : std::abs(ratio);
      worst = std::max(worst, dev);
      scaling.push_back({{"delta", delta}, {"norm", norm}, {"norm_over_delta2", ratio}, {"rel_dev", dev}});
      table.rows.push_back({delta, norm, ratio, dev});
    }
    r["results"] = {{"alpha_inv", rep.alpha_inv},
                    {"alpha", rep.alpha},
                    {"degenerate", rep.degenerate != 0},
                    {"tau", rep.tau},
                    {"bubble_lp_norm", lp},
                    {"scaling", scaling},
                    {"max_scaling_rel_dev", worst}};
    return r;
  }

  json reduce() const {
    json r = base("reduce");
    r["inputs"] = {{"quad", o_.quad}, {"quartic", o_.quartic}};
    if (o_.eps) r["inputs"]["eps"] = *o_.eps;
    hsb_critical_point cp{};
    check(hsb_critical_t(o_.quad, o_.quartic, &cp));
    json res = {{"status", hsb_critical_status_name(cp.status)}};
    if (cp.status == HSB_CRITICAL_FOUND) {
      res["t0"] = cp.t0;
      res["second_derivative"] = cp.second_derivative;
      res["nondegenerate"] = cp.nondegenerate != 0;
      res["message"] = "critical point found";
      if (o_.eps) {
        double d = 0.0;
        check(hsb_predicted_scale(cp.t0, *o_.eps, &d));
        res["predicted_delta"] = d;
      }
    } else if (cp.status == HSB_CRITICAL_SIGN_CONDITION_FAILS) {
      res["message"] = "no critical point: sign condition fails";
    } else {
      res["message"] = "no critical point: quartic coefficient vanishes";
    }
    r["results"] = res;
    return r;
  }

  json family(Table& table) const {
    json r = base("family");
    auto ctx = context(r["inputs"], true);
    r["inputs"]["k_max"] = o_.k_max;
    r["inputs"]["local_moment"] = o_.local_moment;
    if (o_.k_max < 1) throw ApiError{HSB_ERR_DOMAIN, "--k-max must be at least 1"};
    std::vector<hsb_ladder_entry> ladder(static_cast<std::size_t>(o_.k_max));
    check(hsb_family(ctx.get(), moment_of(o_.local_moment), o_.k_max, ladder.data()));
    json arr = json::array();
    table.header = {"k", "lap_h_shift", "shift", "lg_k", "t0"};
    for (const auto& e : ladder) {
      json row = {{"k", e.k}, {"lap_h_shift", e.lap_h_shift}, {"shift", e.shift}, {"lg_k", e.lg_k}};
      row["t0"] = e.has_t0 ? json(e.t0) : json(nullptr);
      arr.push_back(row);
      table.rows.push_back({static_cast<double>(e.k), e.lap_h_shift, e.shift, e.lg_k,
                            e.has_t0 ? e.t0 : std::nan("")});
    }
    r["results"] = {{"ladder", arr}};
    return r;
  }

  json verdict() const {
    json r = base("verdict");
    auto ctx = context(r["inputs"], true);
    r["inputs"]["local_moment"] = o_.local_moment;
    hsb_verdict v{};
    json lgj;
    if (o_.lg_value) {
      r["inputs"]["lg"] = *o_.lg_value;
      const hsb_lg lg{*o_.lg_value, 0.0, *o_.lg_value, 0.0};
      check(hsb_classify_lg(ctx.get(), &lg, &v));
      lgj = {{"total", lg.total}};
    } else {
      hsb_lg lg{};
      check(hsb_lg_total(ctx.get(), moment_of(o_.local_moment), &lg));
      check(hsb_classify_lg(ctx.get(), &lg, &v));
      lgj = {{"local_term", lg.local_term}, {"nonlocal_term", lg.nonlocal_term}, {"total", lg.total}};
    }
    r["results"] = {{"regime", hsb_regime_name(v.regime)},
                    {"lg", lgj},
                    {"lg_sign", v.lg_sign},
                    {"required_f_sign", v.required_f_sign},
                    {"f_condition_met", v.f_condition_met != 0},
                    {"message", v.message}};
    return r;
  }

  json kernel(Table& table) const {
    json r = base("kernel");
    auto ctx = context(r["inputs"], false);
    r["inputs"]["threshold"] = o_.threshold;
    hsb_kernel_report k{};
    check(hsb_kernel_diagnostics(ctx.get(), o_.threshold, &k));
    table.header = {"index", "mode0", "mode2"};
    for (int i = 0; i < HSB_KERNEL_LOWEST; ++i)
      table.rows.push_back({static_cast<double>(i), k.mode0_lowest[i], k.mode2_lowest[i]});
    r["results"] = {{"mode0_min_eig", k.mode0_min_eig},
                    {"mode0_eigvec_alignment_with_Z0", k.mode0_alignment},
                    {"mode0_near_zero_count", k.mode0_near_zero_count},
                    {"mode2_min_eig", k.mode2_min_eig},
                    {"mode0_lowest", std::vector<double>(k.mode0_lowest, k.mode0_lowest + HSB_KERNEL_LOWEST)},
                    {"mode2_lowest", std::vector<double>(k.mode2_lowest, k.mode2_lowest + HSB_KERNEL_LOWEST)}};
    return r;
  }

private:
  const Options& o_;
};

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw ApiError{HSB_ERR_IO, "cannot open '" + path + "' for writing"};
  out.precision(17);
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (!t.labels.empty()) out << t.labels[r] << ",";
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw ApiError{HSB_ERR_IO, "failed writing '" + path + "'"};
}

// Text rendering: scalars as "key: value", arrays of objects as tables.
void render(std::ostream& os, const json& j, const std::string& indent) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      os << indent << it.key() << ":\n";
      render(os, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << indent << it.key() << ":\n";
      std::vector<std::string> cols;
      for (auto c = v.front().begin(); c != v.front().end(); ++c) cols.push_back(c.key());
      os << indent << " ";
      for (const auto& c : cols) os << " " << std::setw(24) << c;
      os << "\n";
      for (const auto& row : v) {
        os << indent << " ";
        for (const auto& c : cols) {
          const json& cell = row.at(c);
          os << " " << std::setw(24) << (cell.is_string() ? cell.get<std::string>() : cell.dump());
        }
        os << "\n";
      }
    } else {
      os << indent << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

int exit_code(hsb_status st) { return st == HSB_ERR_NUMERICAL ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-Sobolev bubble expansion toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "dimension (n >= 3; expansion commands need n >= 7)")->capture_default_str();
    sub->add_option("--s", o.s, "singularity exponent in [0, 2)")->capture_default_str();
    sub->add_flag("--json", o.json_out, "print the report as JSON");
    sub->add_option("--csv", o.csv_path, "write the tabular part of the report as CSV");
    sub->add_option("--output", o.output_path, "write the report to a file instead of stdout");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "radial grid N,Rmax,gamma (default N=8000, Rmax=200, gamma=2/(2-s))");
  };
  auto geometry = [&](CLI::App* sub) {
    grid(sub);
    sub->add_option("--curvature", o.curvature, "flat, sphere:R or a curvature JSON file")->capture_default_str();
    sub->add_option("--potential", o.potential, "potential JSON file (h0, lap_h, f0)");
    sub->add_option("--h0", o.h0, "override h(x0)");
    sub->add_option("--lap-h", o.lap_h, "override the Laplacian of h at x0");
    sub->add_option("--f0", o.f0, "override f(x0)");
    sub->add_flag("--critical", o.critical, "set h0 = c_ns Scal before applying overrides");
    sub->add_option("--convention", o.convention, "Laplacian sign of the inputs: minus-divergence or analyst")
        ->check(CLI::IsMember({"minus-divergence", "analyst"}))
        ->capture_default_str();
  };
  auto moment = [&](CLI::App* sub) {
    sub->add_option("--local-moment", o.local_moment, "moment of the local bracket: r4grad or r2mass")
        ->check(CLI::IsMember({"r4grad", "r2mass"}))
        ->capture_default_str();
  };

  auto* c_constants = app.add_subcommand("constants", "critical exponent and curvature constants");
  common(c_constants);
  auto* c_integrals = app.add_subcommand("integrals", "bubble moment identities by quadrature");
  common(c_integrals);
  auto* c_bubble = app.add_subcommand("bubble", "bubble profiles and PDE residuals");
  common(c_bubble);
  grid(c_bubble);
  c_bubble->add_option("--delta", o.delta, "bubble scale")->capture_default_str();
  c_bubble->add_option("--emit-profile", o.emit_profile, "write r, U, dU/dr, dU/ddelta, Z as CSV");
  auto* c_chat = app.add_subcommand("chat", "solve for hat C(W) in modes 0 and 2");
  common(c_chat);
  geometry(c_chat);
  auto* c_lg = app.add_subcommand("lg", "the quartic coefficient L_g");
  common(c_lg);
  geometry(c_lg);
  moment(c_lg);
  auto* c_energy = app.add_subcommand("energy", "fit the small-scale expansion of J(U_delta)");
  common(c_energy);
  geometry(c_energy);
  c_energy->add_option("--deltas", o.deltas, "sweep lo:hi:count (geometric)")->capture_default_str();
  c_energy->add_option("--r0", o.r0, "truncation radius")->capture_default_str();
  auto* c_remainder = app.add_subcommand("remainder", "remainder norm alpha^(-1) and its scaling");
  common(c_remainder);
  geometry(c_remainder);
  c_remainder->add_option("--scales", o.scales, "comma-separated deltas for the scaling check")
      ->capture_default_str();
  auto* c_reduce = app.add_subcommand("reduce", "critical point of quad t^2 + quartic t^4");
  common(c_reduce);
  c_reduce->add_option("--quad", o.quad, "coefficient of t^2")->required();
  c_reduce->add_option("--quartic", o.quartic, "coefficient of t^4")->required();
  c_reduce->add_option("--eps", o.eps, "perturbation size for the predicted scale");
  auto* c_family = app.add_subcommand("family", "L_g along the ladder h_k = h0 + d^2/k");
  common(c_family);
  geometry(c_family);
  moment(c_family);
  c_family->add_option("--k-max", o.k_max, "largest k")->capture_default_str();
  auto* c_verdict = app.add_subcommand("verdict", "classify the potential at the point");
  common(c_verdict);
  geometry(c_verdict);
  moment(c_verdict);
  c_verdict->add_option("--lg", o.lg_value, "use this L_g instead of computing it");
  auto* c_kernel = app.add_subcommand("kernel", "spectrum of the linearized operator near zero");
  common(c_kernel);
  grid(c_kernel);
  c_kernel->add_option("--threshold", o.threshold, "near-zero eigenvalue threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    Runner run(o);
    Table table;
    json report;
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "constants") report = run.constants();
    else if (cmd == "integrals") report = run.integrals(table);
    else if (cmd == "bubble") report = run.bubble(table);
    else if (cmd == "chat") report = run.chat(table);
    else if (cmd == "lg") report = run.lg();
    else if (cmd == "energy") report = run.energy(table);
    else if (cmd == "remainder") report = run.remainder(table);
    else if (cmd == "reduce") report = run.reduce();
    else if (cmd == "family") report = run.family(table);
    else if (cmd == "verdict") report = run.verdict();
    else report = run.kernel(table);

    if (!o.emit_profile.empty()) write_csv(o.emit_profile, table);
    if (!o.csv_path.empty()) {
      if (table.header.empty()) throw ApiError{HSB_ERR_INVALID_ARGUMENT, cmd + " has no tabular output"};
      write_csv(o.csv_path, table);
    }

    std::ostringstream text;
    if (o.json_out) text << report.dump(2) << "\n";
    else render(text, report, "");
    if (o.output_path.empty()) {
      std::cout << text.str();
    } else {
      std::ofstream out(o.output_path);
      out << text.str();
      if (!out) throw ApiError{HSB_ERR_IO, "failed writing '" + o.output_path + "'"};
    }
    return 0;
  } catch (const ApiError& e) {
    std::cerr << "error (" << hsb_status_name(e.status) << "): " << e.message << "\n";
    return exit_code(e.status);
  }
}

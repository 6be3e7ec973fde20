#include "hsb/hsb.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <ios>
#include <new>
#include <stdexcept>
#include <string>

#include "hsb/energy.hpp"
#include "hsb/errors.hpp"
#include "hsb/geometry.hpp"
#include "hsb/linearized.hpp"
#include "hsb/moments.hpp"
#include "hsb/reduction.hpp"

struct hsb_context {
  hsb::HSParams params;
  hsb::RadialGrid grid;
  hsb::CurvatureData curvature;
  hsb::PotentialJet jet;
};

struct hsb_chat_result {
  hsb::HatC value;
};

namespace {

thread_local std::string g_last_error;

hsb_status fail(hsb_status st, const char* what) {
  g_last_error = what;
  return st;
}

class BadArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Runs `body` and maps the exception hierarchy onto status codes.
template <class Body>
hsb_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return HSB_OK;
  } catch (const BadArgument& e) {
    return fail(HSB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const hsb::DivergenceError& e) {
    return fail(HSB_ERR_DIVERGENT, e.what());
  } catch (const hsb::DomainError& e) {
    return fail(HSB_ERR_DOMAIN, e.what());
  } catch (const hsb::NumericalError& e) {
    return fail(HSB_ERR_NUMERICAL, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(HSB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HSB_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HSB_ERR_INVALID_ARGUMENT, e.what());
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (p == nullptr) throw BadArgument(std::string("null pointer: ") + what);
}

void copy_name(char* dst, std::size_t cap, const std::string& src) {
  std::strncpy(dst, src.c_str(), cap - 1);
  dst[cap - 1] = '\0';
}

hsb::LocalMoment to_moment(hsb_local_moment m) {
  switch (m) {
    case HSB_MOMENT_R4GRAD: return hsb::LocalMoment::r4grad;
    case HSB_MOMENT_R2MASS: return hsb::LocalMoment::r2mass;
  }
  throw BadArgument("unknown local moment");
}

hsb::LaplacianConvention to_convention(hsb_convention c) {
  switch (c) {
    case HSB_CONVENTION_MINUS_DIVERGENCE: return hsb::LaplacianConvention::minus_divergence;
    case HSB_CONVENTION_ANALYST: return hsb::LaplacianConvention::analyst;
  }
  throw BadArgument("unknown Laplacian convention");
}

hsb::WDecomposition to_w(const hsb_w& w) { return {w.a, w.mode0_extra, w.t_free_norm2}; }

hsb_curvature from_curvature(const hsb::CurvatureData& c) {
  return {c.scal, c.ric_norm2, c.rm_norm2, c.lap_scal};
}

const hsb::ModeSolution& mode_of(const hsb_chat_result* res, int ell) {
  need(res, "result");
  if (ell == 0) return res->value.mode0;
  if (ell == 2) return res->value.mode2;
  throw BadArgument("ell must be 0 or 2");
}

hsb::RadialModel model_of(const hsb_context* ctx, double r0) {
  return {ctx->curvature, ctx->jet, r0};
}

void fill_verdict(const hsb::Verdict& v, hsb_verdict* out) {
  out->regime = static_cast<hsb_regime>(v.regime);
  out->lg_sign = v.lg_sign;
  out->required_f_sign = v.required_f_sign;
  out->f_condition_met = v.f_condition_met ? 1 : 0;
  copy_name(out->message, HSB_MESSAGE_LEN, v.message);
}

}  // namespace

extern "C" {

const char* hsb_version(void) { return "0.1.0"; }

const char* hsb_last_error(void) { return g_last_error.c_str(); }

const char* hsb_status_name(hsb_status status) {
  switch (status) {
    case HSB_OK: return "ok";
    case HSB_ERR_DOMAIN: return "domain";
    case HSB_ERR_DIVERGENT: return "divergent";
    case HSB_ERR_NUMERICAL: return "numerical";
    case HSB_ERR_IO: return "io";
    case HSB_ERR_INVALID_ARGUMENT: return "invalid-argument";
  }
  return "unknown";
}

const char* hsb_regime_name(hsb_regime regime) {
  return hsb::regime_name(static_cast<hsb::Regime>(regime));
}

const char* hsb_critical_status_name(hsb_critical_status status) {
  return hsb::critical_status_name(static_cast<hsb::CriticalStatus>(status));
}

hsb_status hsb_context_create(int n, double s, hsb_context** out) {
  return guarded([&] {
    need(out, "out");
    auto* ctx = new hsb_context{};
    try {
      ctx->params = hsb::make_params(n, s);
      ctx->grid = hsb::default_grid(ctx->params);
      ctx->curvature = hsb::curvature_flat();
    } catch (...) {
      delete ctx;
      throw;
    }
    *out = ctx;
  });
}

void hsb_context_destroy(hsb_context* ctx) { delete ctx; }

hsb_status hsb_context_params(const hsb_context* ctx, int* n, double* s) {
  return guarded([&] {
    need(ctx, "ctx");
    need(n, "n");
    need(s, "s");
    *n = ctx->params.n;
    *s = ctx->params.s;
  });
}

hsb_status hsb_context_set_grid(hsb_context* ctx, const hsb_grid* grid) {
  return guarded([&] {
    need(ctx, "ctx");
    need(grid, "grid");
    hsb::RadialGrid g{grid->r_max, grid->n_cells, grid->gamma};
    hsb::validate(g);
    ctx->grid = g;
  });
}

hsb_status hsb_context_grid(const hsb_context* ctx, hsb_grid* grid) {
  return guarded([&] {
    need(ctx, "ctx");
    need(grid, "grid");
    *grid = {ctx->grid.r_max, ctx->grid.N, ctx->grid.gamma};
  });
}

hsb_status hsb_context_set_curvature(hsb_context* ctx, const hsb_curvature* c) {
  return guarded([&] {
    need(ctx, "ctx");
    need(c, "curvature");
    hsb::CurvatureData d{c->scal, c->ric_norm2, c->rm_norm2, c->lap_scal};
    hsb::validate(d, ctx->params.n);
    ctx->curvature = d;
  });
}

hsb_status hsb_context_curvature(const hsb_context* ctx, hsb_curvature* c) {
  return guarded([&] {
    need(ctx, "ctx");
    need(c, "curvature");
    *c = from_curvature(ctx->curvature);
  });
}

hsb_status hsb_context_set_potential(hsb_context* ctx, const hsb_potential* jet) {
  return guarded([&] {
    need(ctx, "ctx");
    need(jet, "potential");
    hsb::PotentialJet j{jet->h0, jet->lap_h, jet->f0};
    hsb::validate(j);
    ctx->jet = j;
  });
}

hsb_status hsb_context_potential(const hsb_context* ctx, hsb_potential* jet) {
  return guarded([&] {
    need(ctx, "ctx");
    need(jet, "potential");
    *jet = {ctx->jet.h0, ctx->jet.lap_h, ctx->jet.f0};
  });
}

hsb_status hsb_curvature_load(const char* spec, int n, hsb_convention conv, hsb_curvature* out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = from_curvature(hsb::curvature_preset(spec, n, to_convention(conv)));
  });
}

hsb_status hsb_potential_load(const char* path, hsb_convention conv, hsb_potential* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    const auto j = hsb::potential_from_file(path, to_convention(conv));
    *out = {j.h0, j.lap_h, j.f0};
  });
}

hsb_status hsb_constants_get(const hsb_context* ctx, hsb_constants* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto c = hsb::derive_constants(ctx->params);
    *out = {c.crit_exp, c.kappa, c.c_ns, c.lambda_ns, c.kappa_pow};
  });
}

hsb_status hsb_yamabe(int n, hsb_yamabe_report* out) {
  return guarded([&] {
    need(out, "out");
    const auto y = hsb::yamabe_consistency(n);
    auto conv = [](const hsb::Rational& r) { return hsb_rational{r.num(), r.den()}; };
    *out = {conv(y.c_at_0), conv(y.lambda_at_0), conv(y.yamabe), y.consistent ? 1 : 0};
  });
}

hsb_status hsb_ipq(double p, double q, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = hsb::ipq(p, q);
  });
}

hsb_status hsb_bubble_moment(const hsb_context* ctx, const char* name, double* closed_form,
                             double* quadrature) {
  return guarded([&] {
    need(ctx, "ctx");
    need(name, "name");
    hsb::MomentKind kind;
    try {
      kind = hsb::moment_from_name(name);
    } catch (const hsb::DomainError& e) {
      throw BadArgument(e.what());
    }
    const double cf = hsb::bubble_moment(ctx->params, kind);
    const double qv = quadrature ? hsb::bubble_moment_quadrature(ctx->params, kind) : 0.0;
    if (closed_form) *closed_form = cf;
    if (quadrature) *quadrature = qv;
  });
}

hsb_status hsb_identity_report(const hsb_context* ctx, hsb_ratio_row rows[HSB_IDENTITY_ROWS],
                               double* max_rel_residual) {
  return guarded([&] {
    need(ctx, "ctx");
    need(rows, "rows");
    const auto rep = hsb::identity_report(ctx->params);
    if (rep.rows.size() != HSB_IDENTITY_ROWS) throw hsb::NumericalError("unexpected identity count");
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      copy_name(rows[i].name, HSB_NAME_LEN, r.name);
      rows[i].quadrature = r.quadrature;
      rows[i].closed_form = r.closed_form;
      rows[i].abs_residual = r.abs_residual;
      rows[i].rel_residual = r.rel_residual;
    }
    if (max_rel_residual) *max_rel_residual = rep.max_rel_residual;
  });
}

hsb_status hsb_eval_profiles(const hsb_context* ctx, double delta, double r,
                             hsb_profile_point* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto pp = hsb::eval_profiles(ctx->params, delta, r);
    *out = {pp.U, pp.dr_U, pp.ddelta_U, pp.Z};
  });
}

hsb_status hsb_pde_residual(const hsb_context* ctx, int finite_difference, double* residual_u,
                            double* residual_z) {
  return guarded([&] {
    need(ctx, "ctx");
    const auto m = finite_difference ? hsb::DerivativeMethod::finite_difference4
                                     : hsb::DerivativeMethod::analytic;
    const auto res = hsb::pde_residual(ctx->params, ctx->grid, m);
    if (residual_u) *residual_u = res.max_rel_residual_U;
    if (residual_z) *residual_z = res.max_rel_residual_Z;
  });
}

hsb_status hsb_kernel_diagnostics(const hsb_context* ctx, double near_zero_threshold,
                                  hsb_kernel_report* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto kd = hsb::kernel_diagnostics(ctx->params, ctx->grid, near_zero_threshold);
    hsb_kernel_report r{};
    r.mode0_min_eig = kd.mode0_min_eig;
    r.mode0_alignment = kd.mode0_eigvec_alignment_with_Z0;
    r.mode2_min_eig = kd.mode2_min_eig;
    r.mode0_near_zero_count = kd.mode0_near_zero_count;
    for (int i = 0; i < HSB_KERNEL_LOWEST; ++i) {
      r.mode0_lowest[i] = kd.mode0_lowest.at(static_cast<std::size_t>(i));
      r.mode2_lowest[i] = kd.mode2_lowest.at(static_cast<std::size_t>(i));
    }
    *out = r;
  });
}

hsb_status hsb_assemble_w(const hsb_context* ctx, double a, hsb_w* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto w = hsb::assemble_w(ctx->curvature, ctx->params, a);
    *out = {w.a, w.mode0_extra, w.t_free_norm2};
  });
}

hsb_status hsb_hat_c(const hsb_context* ctx, const hsb_w* w, hsb_chat_result** out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(w, "w");
    need(out, "out");
    auto* res = new hsb_chat_result{};
    try {
      res->value = hsb::hat_c(ctx->params, to_w(*w), ctx->grid);
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
  });
}

void hsb_chat_destroy(hsb_chat_result* res) { delete res; }

double hsb_chat_nonlocal_term(const hsb_chat_result* res) {
  return res ? res->value.nonlocal_term : 0.0;
}

double hsb_chat_projection(const hsb_chat_result* res) { return res ? res->value.projection : 0.0; }

hsb_status hsb_chat_mode_info(const hsb_chat_result* res, int ell, hsb_mode_info* out) {
  return guarded([&] {
    need(out, "out");
    const auto& m = mode_of(res, ell);
    *out = {ell, m.u.size(), m.tail_coefficient, m.multiplier, m.defect, m.z0_orthogonality};
  });
}

hsb_status hsb_chat_mode_profile(const hsb_chat_result* res, int ell, double* r, double* u,
                                 size_t capacity) {
  return guarded([&] {
    const auto& m = mode_of(res, ell);
    if (capacity < m.u.size()) throw BadArgument("profile buffer too small");
    for (std::size_t i = 0; i < m.u.size(); ++i) {
      if (r) r[i] = m.r[i];
      if (u) u[i] = m.u[i];
    }
  });
}

hsb_status hsb_bilinear_pairing(const hsb_context* ctx, const hsb_w* w1, const hsb_w* w2,
                                double t_inner, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(w1, "w1");
    need(w2, "w2");
    need(out, "out");
    *out = hsb::bilinear_pairing(ctx->params, to_w(*w1), to_w(*w2), t_inner, ctx->grid);
  });
}

hsb_status hsb_beta(const hsb_context* ctx, const hsb_w* w, double alpha, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(w, "w");
    need(out, "out");
    *out = hsb::beta_coefficient(ctx->params, to_w(*w), alpha);
  });
}

hsb_status hsb_density_coeffs(const hsb_context* ctx, double* c2, double* c4) {
  return guarded([&] {
    need(ctx, "ctx");
    const auto d = hsb::density_coeffs(ctx->curvature, ctx->params.n);
    if (c2) *c2 = d.c2;
    if (c4) *c4 = d.c4;
  });
}

hsb_status hsb_kns(const hsb_context* ctx, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = hsb::kns(ctx->curvature, ctx->params);
  });
}

hsb_status hsb_collapse_identity(const hsb_context* ctx, double* lhs, double* rhs) {
  return guarded([&] {
    need(ctx, "ctx");
    const auto c = hsb::collapse_identity(ctx->curvature, ctx->params);
    if (lhs) *lhs = c.lhs;
    if (rhs) *rhs = c.rhs;
  });
}

hsb_status hsb_lg_total(const hsb_context* ctx, hsb_local_moment moment, hsb_lg* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto lg = hsb::lg_total(ctx->curvature, ctx->jet, ctx->params, ctx->grid, to_moment(moment));
    *out = {lg.local_term, lg.nonlocal_term, lg.total, lg.moment};
  });
}

hsb_status hsb_j_at_bubble(const hsb_context* ctx, double r0, double delta, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = hsb::j_at_bubble(model_of(ctx, r0), ctx->params, delta);
  });
}

hsb_status hsb_predicted_coeffs(const hsb_context* ctx, double r0, hsb_coeffs* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto c = hsb::predicted_coeffs(model_of(ctx, r0), ctx->params);
    *out = {c.c0, c.c2, c.c4};
  });
}

hsb_status hsb_energy_fit(const hsb_context* ctx, double r0, const double* deltas, size_t count,
                          hsb_fit_summary* summary, double* values, double* residuals) {
  return guarded([&] {
    need(ctx, "ctx");
    need(deltas, "deltas");
    need(summary, "summary");
    const std::vector<double> d(deltas, deltas + count);
    const auto f = hsb::fit_expansion(model_of(ctx, r0), ctx->params, d);
    *summary = {{f.c0_fit, f.c2_fit, f.c4_fit},
                {f.c0_se, f.c2_se, f.c4_se},
                {f.c0_pred, f.c2_pred, f.c4_pred},
                f.c4_pred_r4grad,
                {f.c0_rel_dev, f.c2_rel_dev, f.c4_rel_dev},
                f.c2_reference};
    for (std::size_t i = 0; i < count; ++i) {
      if (values) values[i] = f.values[i];
      if (residuals) residuals[i] = f.residuals[i];
    }
  });
}

hsb_status hsb_parse_sweep(const char* spec, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(spec, "spec");
    need(count, "count");
    const auto v = hsb::parse_sweep(spec);
    if (out != nullptr) {
      if (capacity < v.size()) throw BadArgument("sweep buffer too small");
      std::copy(v.begin(), v.end(), out);
    }
    *count = v.size();
  });
}

hsb_status hsb_remainder(const hsb_context* ctx, double h0, hsb_remainder_report* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto r = hsb::remainder_alpha(ctx->curvature, ctx->params, h0);
    *out = {r.alpha_inv, r.alpha, r.degenerate ? 1 : 0, r.tau};
  });
}

hsb_status hsb_remainder_at_scale(const hsb_context* ctx, double h0, double delta, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = hsb::remainder_norm_at_scale(ctx->curvature, ctx->params, h0, delta);
  });
}

hsb_status hsb_bubble_lp_norm(const hsb_context* ctx, double* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = hsb::bubble_lp_norm_closed(ctx->params);
  });
}

hsb_status hsb_critical_t(double quad, double quartic, hsb_critical_point* out) {
  return guarded([&] {
    need(out, "out");
    const auto cp = hsb::critical_t({quad, quartic});
    *out = {static_cast<hsb_critical_status>(cp.status), cp.t0.value_or(0.0),
            cp.second_derivative, cp.nondegenerate ? 1 : 0};
  });
}

hsb_status hsb_predicted_scale(double t0, double eps, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = hsb::predicted_scale(t0, eps);
  });
}

hsb_status hsb_family(const hsb_context* ctx, hsb_local_moment moment, int k_max,
                      hsb_ladder_entry* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto m = to_moment(moment);
    const auto base = hsb::lg_total(ctx->curvature, ctx->jet, ctx->params, ctx->grid, m);
    const auto ladder = hsb::family_theorem2(base, ctx->params, ctx->jet.f0, k_max, m);
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const auto& e = ladder[i];
      out[i] = {e.k, e.lap_h_shift, e.shift, e.lg_k, e.t0 ? 1 : 0, e.t0.value_or(0.0)};
    }
  });
}

hsb_status hsb_classify_lg(const hsb_context* ctx, const hsb_lg* lg, hsb_verdict* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(lg, "lg");
    need(out, "out");
    const hsb::LgBreakdown b{lg->local_term, lg->nonlocal_term, lg->total, lg->moment};
    fill_verdict(hsb::verdict(ctx->jet, ctx->curvature, ctx->params, b), out);
  });
}

hsb_status hsb_classify(const hsb_context* ctx, hsb_local_moment moment, hsb_verdict* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    const auto lg = hsb::lg_total(ctx->curvature, ctx->jet, ctx->params, ctx->grid, to_moment(moment));
    fill_verdict(hsb::verdict(ctx->jet, ctx->curvature, ctx->params, lg), out);
  });
}

}  // extern "C"

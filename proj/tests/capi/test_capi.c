/* Exercises the shared-library interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "hsb/hsb.h"

static int failures = 0;

#define EXPECT(cond)                                                     \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

static int close_rel(double a, double b, double tol) {
  return fabs(a - b) <= tol * fmax(fabs(a), fabs(b));
}

static void test_errors(void) {
  hsb_context* ctx = NULL;
  EXPECT(hsb_context_create(2, 1.0, &ctx) == HSB_ERR_DOMAIN);
  EXPECT(ctx == NULL);
  EXPECT(strlen(hsb_last_error()) > 0);
  EXPECT(hsb_context_create(7, 1.0, NULL) == HSB_ERR_INVALID_ARGUMENT);
  double v = 0.0;
  EXPECT(hsb_ipq(3.0, 2.0, &v) == HSB_ERR_DIVERGENT);
  EXPECT(hsb_ipq(3.0, 1.0, NULL) == HSB_ERR_INVALID_ARGUMENT);
  EXPECT(strcmp(hsb_status_name(HSB_ERR_NUMERICAL), "numerical") == 0);
  hsb_curvature c;
  EXPECT(hsb_curvature_load("/nonexistent/curvature.json", 7, HSB_CONVENTION_MINUS_DIVERGENCE, &c) ==
         HSB_ERR_IO);
  EXPECT(hsb_curvature_load("sphere:1", 7, HSB_CONVENTION_MINUS_DIVERGENCE, &c) == HSB_OK);
  EXPECT(c.scal == 42.0);
  /* free functions tolerate NULL handles */
  hsb_context_destroy(NULL);
  hsb_chat_destroy(NULL);
}

static void test_constants(void) {
  hsb_context* ctx = NULL;
  EXPECT(hsb_context_create(7, 1.0, &ctx) == HSB_OK);
  hsb_constants k;
  EXPECT(hsb_constants_get(ctx, &k) == HSB_OK);
  EXPECT(close_rel(k.kappa_pow, 30.0, 1e-14));
  EXPECT(close_rel(k.crit_exp, 2.4, 1e-15));
  hsb_yamabe_report y;
  EXPECT(hsb_yamabe(12, &y) == HSB_OK);
  EXPECT(y.consistent && y.yamabe.num == 5 && y.yamabe.den == 22);
  double closed = 0.0, quad = 0.0;
  EXPECT(hsb_bubble_moment(ctx, "r4grad", &closed, &quad) == HSB_OK);
  EXPECT(close_rel(closed, 1826551571.7122075885, 1e-13));
  EXPECT(close_rel(quad, closed, 1e-9));
  EXPECT(hsb_bubble_moment(ctx, "nope", &closed, &quad) == HSB_ERR_INVALID_ARGUMENT);
  hsb_ratio_row rows[HSB_IDENTITY_ROWS];
  double worst = 1.0;
  EXPECT(hsb_identity_report(ctx, rows, &worst) == HSB_OK);
  EXPECT(worst < 1e-10);
  EXPECT(strcmp(rows[0].name, "r2grad/mass2") == 0);
  EXPECT(close_rel(rows[0].closed_form, 140.0 / 11.0, 1e-14));
  hsb_context_destroy(ctx);
}

static void test_geometry_and_lg(void) {
  hsb_context* ctx = NULL;
  EXPECT(hsb_context_create(7, 1.0, &ctx) == HSB_OK);
  hsb_grid g = {200.0, 600, 2.0};
  EXPECT(hsb_context_set_grid(ctx, &g) == HSB_OK);
  hsb_grid bad = {200.0, 2, 2.0};
  EXPECT(hsb_context_set_grid(ctx, &bad) == HSB_ERR_DOMAIN);
  hsb_grid back;
  EXPECT(hsb_context_grid(ctx, &back) == HSB_OK && back.n_cells == 600);

  hsb_curvature sphere = {42.0, 252.0, 84.0, 0.0};
  EXPECT(hsb_context_set_curvature(ctx, &sphere) == HSB_OK);
  hsb_curvature invalid = {10.0, 1.0, 0.0, 0.0};
  EXPECT(hsb_context_set_curvature(ctx, &invalid) == HSB_ERR_DOMAIN);
  double kns = 0.0, c2 = 0.0, c4 = 0.0, lhs = 0.0, rhs = 0.0;
  EXPECT(hsb_kns(ctx, &kns) == HSB_OK && close_rel(kns, 98.0 / 11.0, 1e-12));
  EXPECT(hsb_density_coeffs(ctx, &c2, &c4) == HSB_OK);
  EXPECT(close_rel(c2, -1.0, 1e-12) && close_rel(c4, 7.0 / 15.0, 1e-12));
  EXPECT(hsb_collapse_identity(ctx, &lhs, &rhs) == HSB_OK && close_rel(lhs, rhs, 1e-12));

  hsb_constants k;
  hsb_constants_get(ctx, &k);
  hsb_potential jet = {k.c_ns * 42.0, 0.0, -1.0};
  EXPECT(hsb_context_set_potential(ctx, &jet) == HSB_OK);
  hsb_lg lg;
  EXPECT(hsb_lg_total(ctx, HSB_MOMENT_R4GRAD, &lg) == HSB_OK);
  EXPECT(close_rel(lg.local_term, 98.0 / 11.0 / 28.0 * 1826551571.7122075885, 1e-12));
  EXPECT(lg.total == lg.local_term + lg.nonlocal_term);

  hsb_w w;
  EXPECT(hsb_assemble_w(ctx, k.c_ns * 42.0, &w) == HSB_OK);
  EXPECT(close_rel(w.mode0_extra, 2.0, 1e-14));
  hsb_chat_result* res = NULL;
  EXPECT(hsb_hat_c(ctx, &w, &res) == HSB_OK && res != NULL);
  EXPECT(close_rel(-0.5 * hsb_chat_nonlocal_term(res), lg.nonlocal_term, 1e-12));
  hsb_mode_info info;
  EXPECT(hsb_chat_mode_info(res, 0, &info) == HSB_OK);
  EXPECT(info.size == 601 && info.z0_orthogonality < 1e-8);
  double r[601], u[601];
  EXPECT(hsb_chat_mode_profile(res, 0, r, u, 601) == HSB_OK);
  EXPECT(r[0] == 0.0 && close_rel(r[600], 200.0, 1e-14));
  EXPECT(hsb_chat_mode_profile(res, 0, r, u, 10) == HSB_ERR_INVALID_ARGUMENT);
  EXPECT(hsb_chat_mode_info(res, 1, &info) == HSB_ERR_INVALID_ARGUMENT);
  hsb_chat_destroy(res);

  hsb_verdict v;
  EXPECT(hsb_classify(ctx, HSB_MOMENT_R4GRAD, &v) == HSB_OK);
  EXPECT(v.regime == HSB_REGIME_CRITICAL_BLOWUP_CANDIDATE);
  EXPECT(v.lg_sign == 1 && v.required_f_sign == -1 && v.f_condition_met);
  EXPECT(strcmp(hsb_regime_name(v.regime), "critical-blowup-candidate") == 0);

  hsb_ladder_entry ladder[10];
  EXPECT(hsb_family(ctx, HSB_MOMENT_R4GRAD, 10, ladder) == HSB_OK);
  EXPECT(ladder[0].shift == 0.5 * lg.moment);
  EXPECT(ladder[9].k == 10);
  hsb_context_destroy(ctx);
}

static void test_energy_and_reduction(void) {
  hsb_context* ctx = NULL;
  EXPECT(hsb_context_create(7, 1.0, &ctx) == HSB_OK);
  double sweep[16];
  size_t count = 0;
  EXPECT(hsb_parse_sweep("0.005:0.05:12", NULL, 0, &count) == HSB_OK && count == 12);
  EXPECT(hsb_parse_sweep("0.005:0.05:12", sweep, 16, &count) == HSB_OK);
  EXPECT(close_rel(sweep[11], 0.05, 1e-15));
  EXPECT(hsb_parse_sweep("0.005:0.05:12", sweep, 4, &count) == HSB_ERR_INVALID_ARGUMENT);

  hsb_potential jet = {1.0, 0.0, 0.0};
  hsb_context_set_potential(ctx, &jet);
  double j = 0.0;
  EXPECT(hsb_j_at_bubble(ctx, 1.0, 0.01, &j) == HSB_OK && j > 0.0);
  EXPECT(hsb_j_at_bubble(ctx, 1.0, 0.5, &j) == HSB_ERR_DOMAIN);
  double narrow[6] = {0.040, 0.041, 0.042, 0.043, 0.044, 0.045};
  hsb_fit_summary fit;
  EXPECT(hsb_energy_fit(ctx, 1.0, narrow, 6, &fit, NULL, NULL) == HSB_ERR_NUMERICAL);

  hsb_remainder_report rep;
  double norm = 0.0, scaled = 0.0;
  EXPECT(hsb_remainder(ctx, 1.0, &rep) == HSB_OK && !rep.degenerate);
  EXPECT(hsb_bubble_lp_norm(ctx, &norm) == HSB_OK && close_rel(rep.alpha_inv, norm, 1e-8));
  EXPECT(hsb_remainder_at_scale(ctx, 1.0, 0.01, &scaled) == HSB_OK);
  EXPECT(close_rel(scaled / 1e-4, rep.alpha_inv, 1e-10));
  EXPECT(hsb_remainder(ctx, 0.0, &rep) == HSB_OK && rep.degenerate && rep.alpha_inv == 0.0);

  hsb_critical_point cp;
  EXPECT(hsb_critical_t(-2.0, 1.0, &cp) == HSB_OK);
  EXPECT(cp.status == HSB_CRITICAL_FOUND && cp.t0 == 1.0 && cp.second_derivative == 8.0);
  EXPECT(hsb_critical_t(2.0, 1.0, &cp) == HSB_OK && cp.status == HSB_CRITICAL_SIGN_CONDITION_FAILS);
  EXPECT(hsb_critical_t(2.0, 0.0, &cp) == HSB_OK && cp.status == HSB_CRITICAL_DEGENERATE);
  double d = 0.0;
  EXPECT(hsb_predicted_scale(2.0, 0.25, &d) == HSB_OK && d == 1.0);
  hsb_context_destroy(ctx);
}

int main(void) {
  printf("libhsblowup %s\n", hsb_version());
  test_errors();
  test_constants();
  test_geometry_and_lg();
  test_energy_and_reduction();
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}

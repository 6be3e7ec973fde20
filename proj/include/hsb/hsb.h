#ifndef HSB_HSB_H
#define HSB_HSB_H

/*
 * C interface to the Hardy-Sobolev blow-up toolkit.
 *
 * Every fallible call returns an hsb_status. On failure the message of the
 * most recent error on the calling thread is available from hsb_last_error().
 * Output pointers are written only on success.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(HSB_BUILDING_LIBRARY)
#    define HSB_API __declspec(dllexport)
#  else
#    define HSB_API __declspec(dllimport)
#  endif
#else
#  define HSB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hsb_status {
  HSB_OK = 0,
  HSB_ERR_DOMAIN = 1,           /* input outside the admissible parameter range */
  HSB_ERR_DIVERGENT = 2,        /* integral or moment does not converge */
  HSB_ERR_NUMERICAL = 3,        /* non-convergence or ill-conditioned solve */
  HSB_ERR_IO = 4,               /* unreadable or malformed input file */
  HSB_ERR_INVALID_ARGUMENT = 5  /* null pointer, short buffer, unknown name */
} hsb_status;

typedef enum hsb_local_moment {
  HSB_MOMENT_R4GRAD = 0, /* int |X|^4 |grad U1|^2 */
  HSB_MOMENT_R2MASS = 1  /* int |X|^2 U1^2 */
} hsb_local_moment;

typedef enum hsb_convention {
  HSB_CONVENTION_MINUS_DIVERGENCE = 0, /* Delta = -div grad (positive operator) */
  HSB_CONVENTION_ANALYST = 1           /* Delta = +div grad; values are negated on load */
} hsb_convention;

/* Parameters (n, s), radial grid, curvature data and potential jet. */
typedef struct hsb_context hsb_context;
/* Result of a hat C solve, owned by the caller. */
typedef struct hsb_chat_result hsb_chat_result;

typedef struct hsb_curvature {
  double scal;
  double ric_norm2;
  double rm_norm2;
  double lap_scal;
} hsb_curvature;

typedef struct hsb_potential {
  double h0;
  double lap_h;
  double f0;
} hsb_potential;

typedef struct hsb_grid {
  double r_max;
  int n_cells;
  double gamma;
} hsb_grid;

typedef struct hsb_constants {
  double crit_exp;
  double kappa;
  double c_ns;
  double lambda_ns;
  double kappa_pow;
} hsb_constants;

typedef struct hsb_rational {
  long long num;
  long long den;
} hsb_rational;

typedef struct hsb_yamabe_report {
  hsb_rational c_at_0;
  hsb_rational lambda_at_0;
  hsb_rational yamabe;
  int consistent;
} hsb_yamabe_report;

#define HSB_IDENTITY_ROWS 6
#define HSB_NAME_LEN 32

typedef struct hsb_ratio_row {
  char name[HSB_NAME_LEN];
  double quadrature;
  double closed_form;
  double abs_residual;
  double rel_residual;
} hsb_ratio_row;

typedef struct hsb_profile_point {
  double u;
  double dr_u;
  double ddelta_u;
  double z;
} hsb_profile_point;

#define HSB_KERNEL_LOWEST 4

typedef struct hsb_kernel_report {
  double mode0_min_eig;
  double mode0_alignment;
  double mode2_min_eig;
  int mode0_near_zero_count;
  double mode0_lowest[HSB_KERNEL_LOWEST];
  double mode2_lowest[HSB_KERNEL_LOWEST];
} hsb_kernel_report;

typedef struct hsb_w {
  double a;
  double mode0_extra;
  double t_free_norm2;
} hsb_w;

typedef struct hsb_mode_info {
  int ell;
  size_t size;
  double tail_coefficient;
  double multiplier;
  double defect;
  double z0_orthogonality;
} hsb_mode_info;

typedef struct hsb_lg {
  double local_term;
  double nonlocal_term;
  double total;
  double moment;
} hsb_lg;

typedef struct hsb_coeffs {
  double c0;
  double c2;
  double c4;
} hsb_coeffs;

typedef struct hsb_fit_summary {
  hsb_coeffs fit;
  hsb_coeffs standard_error;
  hsb_coeffs predicted;
  double c4_pred_r4grad;
  hsb_coeffs rel_dev;
  double c2_reference;
} hsb_fit_summary;

typedef struct hsb_remainder_report {
  double alpha_inv;
  double alpha;
  int degenerate;
  double tau;
} hsb_remainder_report;

typedef enum hsb_critical_status {
  HSB_CRITICAL_FOUND = 0,
  HSB_CRITICAL_SIGN_CONDITION_FAILS = 1,
  HSB_CRITICAL_DEGENERATE = 2
} hsb_critical_status;

typedef struct hsb_critical_point {
  hsb_critical_status status;
  double t0; /* meaningful when status == HSB_CRITICAL_FOUND */
  double second_derivative;
  int nondegenerate;
} hsb_critical_point;

typedef struct hsb_ladder_entry {
  int k;
  double lap_h_shift;
  double shift;
  double lg_k;
  int has_t0;
  double t0;
} hsb_ladder_entry;

typedef enum hsb_regime {
  HSB_REGIME_SUBCRITICAL_MINIMIZING = 0,
  HSB_REGIME_CRITICAL_BLOWUP_CANDIDATE = 1,
  HSB_REGIME_CRITICAL_DEGENERATE = 2,
  HSB_REGIME_SUPERCRITICAL = 3
} hsb_regime;

#define HSB_MESSAGE_LEN 160

typedef struct hsb_verdict {
  hsb_regime regime;
  int lg_sign;
  int required_f_sign;
  int f_condition_met;
  char message[HSB_MESSAGE_LEN];
} hsb_verdict;

/* ---- library ---------------------------------------------------------- */

HSB_API const char* hsb_version(void);
HSB_API const char* hsb_last_error(void);
HSB_API const char* hsb_status_name(hsb_status status);
HSB_API const char* hsb_regime_name(hsb_regime regime);
HSB_API const char* hsb_critical_status_name(hsb_critical_status status);

/* ---- context ---------------------------------------------------------- */

/* Creates a context for n >= 3, 0 <= s < 2 with the default grid for s,
 * flat curvature and a zero potential jet. */
HSB_API hsb_status hsb_context_create(int n, double s, hsb_context** out);
HSB_API void hsb_context_destroy(hsb_context* ctx);
HSB_API hsb_status hsb_context_params(const hsb_context* ctx, int* n, double* s);
HSB_API hsb_status hsb_context_set_grid(hsb_context* ctx, const hsb_grid* grid);
HSB_API hsb_status hsb_context_grid(const hsb_context* ctx, hsb_grid* grid);
HSB_API hsb_status hsb_context_set_curvature(hsb_context* ctx, const hsb_curvature* c);
HSB_API hsb_status hsb_context_curvature(const hsb_context* ctx, hsb_curvature* c);
HSB_API hsb_status hsb_context_set_potential(hsb_context* ctx, const hsb_potential* jet);
HSB_API hsb_status hsb_context_potential(const hsb_context* ctx, hsb_potential* jet);

/* "flat", "sphere:R" or the path of a curvature JSON file. */
HSB_API hsb_status hsb_curvature_load(const char* spec, int n, hsb_convention conv,
                                      hsb_curvature* out);
HSB_API hsb_status hsb_potential_load(const char* path, hsb_convention conv, hsb_potential* out);

/* ---- constants and moments ---------------------------------------------- */

HSB_API hsb_status hsb_constants_get(const hsb_context* ctx, hsb_constants* out);
HSB_API hsb_status hsb_yamabe(int n, hsb_yamabe_report* out);
HSB_API hsb_status hsb_ipq(double p, double q, double* out);
/* Moment by name (mass2, r2mass, r2grad, r4grad, gradsq, crit, r2crit,
 * r4crit, z0grad): closed form and independent quadrature. */
HSB_API hsb_status hsb_bubble_moment(const hsb_context* ctx, const char* name,
                                     double* closed_form, double* quadrature);
HSB_API hsb_status hsb_identity_report(const hsb_context* ctx, hsb_ratio_row rows[HSB_IDENTITY_ROWS],
                                       double* max_rel_residual);

/* ---- bubble ----------------------------------------------------------- */

HSB_API hsb_status hsb_eval_profiles(const hsb_context* ctx, double delta, double r,
                                     hsb_profile_point* out);
HSB_API hsb_status hsb_pde_residual(const hsb_context* ctx, int finite_difference,
                                    double* residual_u, double* residual_z);

/* ---- linearized operator ------------------------------------------------ */

HSB_API hsb_status hsb_kernel_diagnostics(const hsb_context* ctx, double near_zero_threshold,
                                          hsb_kernel_report* out);
/* W from the context curvature with amplitude a on U1. */
HSB_API hsb_status hsb_assemble_w(const hsb_context* ctx, double a, hsb_w* out);
HSB_API hsb_status hsb_hat_c(const hsb_context* ctx, const hsb_w* w, hsb_chat_result** out);
HSB_API void hsb_chat_destroy(hsb_chat_result* res);
HSB_API double hsb_chat_nonlocal_term(const hsb_chat_result* res);
HSB_API double hsb_chat_projection(const hsb_chat_result* res);
/* ell is 0 or 2. */
HSB_API hsb_status hsb_chat_mode_info(const hsb_chat_result* res, int ell, hsb_mode_info* out);
/* Copies the nodes and radial profile; both buffers need hsb_mode_info.size entries. */
HSB_API hsb_status hsb_chat_mode_profile(const hsb_chat_result* res, int ell, double* r, double* u,
                                         size_t capacity);
HSB_API hsb_status hsb_bilinear_pairing(const hsb_context* ctx, const hsb_w* w1, const hsb_w* w2,
                                        double t_inner, double* out);
HSB_API hsb_status hsb_beta(const hsb_context* ctx, const hsb_w* w, double alpha, double* out);

/* ---- geometry --------------------------------------------------------- */

HSB_API hsb_status hsb_density_coeffs(const hsb_context* ctx, double* c2, double* c4);
HSB_API hsb_status hsb_kns(const hsb_context* ctx, double* out);
HSB_API hsb_status hsb_collapse_identity(const hsb_context* ctx, double* lhs, double* rhs);
HSB_API hsb_status hsb_lg_total(const hsb_context* ctx, hsb_local_moment moment, hsb_lg* out);

/* ---- energy ----------------------------------------------------------- */

HSB_API hsb_status hsb_j_at_bubble(const hsb_context* ctx, double r0, double delta, double* out);
HSB_API hsb_status hsb_predicted_coeffs(const hsb_context* ctx, double r0, hsb_coeffs* out);
/* values and residuals are optional; when given they need `count` entries. */
HSB_API hsb_status hsb_energy_fit(const hsb_context* ctx, double r0, const double* deltas,
                                  size_t count, hsb_fit_summary* summary, double* values,
                                  double* residuals);
/* "lo:hi:count" with geometric spacing. Writes up to `capacity` values. */
HSB_API hsb_status hsb_parse_sweep(const char* spec, double* out, size_t capacity, size_t* count);
HSB_API hsb_status hsb_remainder(const hsb_context* ctx, double h0, hsb_remainder_report* out);
HSB_API hsb_status hsb_remainder_at_scale(const hsb_context* ctx, double h0, double delta,
                                          double* out);
HSB_API hsb_status hsb_bubble_lp_norm(const hsb_context* ctx, double* out);

/* ---- reduction -------------------------------------------------------- */

HSB_API hsb_status hsb_critical_t(double quad, double quartic, hsb_critical_point* out);
HSB_API hsb_status hsb_predicted_scale(double t0, double eps, double* out);
/* Ladder h_k = h0 + d^2/k for k = 1..k_max from the context data; `out`
 * needs k_max entries. */
HSB_API hsb_status hsb_family(const hsb_context* ctx, hsb_local_moment moment, int k_max,
                              hsb_ladder_entry* out);
/* Classification from an explicit L_g value (local and nonlocal parts). */
HSB_API hsb_status hsb_classify_lg(const hsb_context* ctx, const hsb_lg* lg, hsb_verdict* out);
/* Classification with L_g computed from the context. */
HSB_API hsb_status hsb_classify(const hsb_context* ctx, hsb_local_moment moment, hsb_verdict* out);

#ifdef __cplusplus
}
#endif

#endif

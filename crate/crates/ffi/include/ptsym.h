#ifndef PTSYM_H
#define PTSYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PtsComponent {
  PTS_COMPONENT_RE = 0,
  PTS_COMPONENT_IM = 1,
  PTS_COMPONENT_BOTH = 2,
} PtsComponent;

typedef enum PtsFamily {
  PTS_FAMILY_H_ORIGINAL = 0,
  PTS_FAMILY_H_PT_PRINTED = 1,
  PTS_FAMILY_H1_PT = 2,
  PTS_FAMILY_H_SIMILARITY_EXACT = 3,
} PtsFamily;

typedef enum PtsQuantity {
  PTS_QUANTITY_EIGENVALUE = 0,
  PTS_QUANTITY_EIGENVALUE_SQUARED = 1,
  PTS_QUANTITY_MODULUS_SQUARED = 2,
  PTS_QUANTITY_REAL_PART_SQUARED = 3,
} PtsQuantity;

typedef enum PtsStatus {
  PTS_STATUS_OK = 0,
  PTS_STATUS_NULL_POINTER = 1,
  PTS_STATUS_INVALID_ARGUMENT = 2,
  PTS_STATUS_INVALID_UTF8 = 3,
  PTS_STATUS_BUFFER_TOO_SMALL = 4,
  PTS_STATUS_OUT_OF_RANGE = 5,
  PTS_STATUS_SHAPE = 6,
  PTS_STATUS_NON_FINITE = 7,
  PTS_STATUS_SINGULAR = 8,
  PTS_STATUS_CONVERGENCE = 9,
  PTS_STATUS_EXCEPTIONAL_POINT = 10,
  PTS_STATUS_PARSE = 11,
  PTS_STATUS_TEMPLATE = 12,
  PTS_STATUS_INVALID_SWEEP = 13,
  PTS_STATUS_IO = 14,
  PTS_STATUS_REPORT = 15,
  PTS_STATUS_PANIC = 99,
} PtsStatus;

typedef struct PtsMatrix PtsMatrix;

typedef struct PtsSweepResult PtsSweepResult;

typedef struct PtsSweepSpec PtsSweepSpec;

typedef struct PtsTemplate PtsTemplate;

// Outcome of a symmetry check.
typedef struct PtsVerdict {
  double residual;
  // Absolute threshold the residual was compared against.
  double threshold;
  bool holds;
} PtsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL after a
// successful call. Valid until the next `pts_*` call on the same thread.
const char *pts_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *pts_version(void);

void pts_string_free(char *s);

// Builds a `rows x cols` matrix from row-major real and imaginary parts.
// `im` may be NULL for a real matrix.
enum PtsStatus pts_matrix_new(size_t rows,
                              size_t cols,
                              const double *re,
                              const double *im,
                              struct PtsMatrix **out);

// One of the built-in 2x2 families at `(a, b, c)`; `family` is a `PtsFamily`.
enum PtsStatus pts_matrix_family(uint32_t family,
                                 double a,
                                 double b,
                                 double c,
                                 struct PtsMatrix **out);

void pts_matrix_free(struct PtsMatrix *m);

enum PtsStatus pts_matrix_dims(const struct PtsMatrix *m, size_t *rows, size_t *cols);

enum PtsStatus pts_matrix_get(const struct PtsMatrix *m,
                              size_t row,
                              size_t col,
                              double *re,
                              double *im);

// Eigenvalues in canonical order (Re descending, then Im descending).
// `degenerate` may be NULL.
enum PtsStatus pts_eigenvalues(const struct PtsMatrix *m,
                               double *re,
                               double *im,
                               size_t cap,
                               size_t *len_out,
                               bool *degenerate);

// As [`pts_eigenvalues`] but always through the iterative QR solver.
enum PtsStatus pts_eigenvalues_iterative(const struct PtsMatrix *m,
                                         double *re,
                                         double *im,
                                         size_t cap,
                                         size_t *len_out,
                                         bool *degenerate);

// PT check with parity `diag(signs)`; `tol` is relative to `max(1, ||H||_F)`.
enum PtsStatus pts_check_pt(const struct PtsMatrix *h,
                            const double *signs,
                            size_t n,
                            double tol,
                            struct PtsVerdict *out);

enum PtsStatus pts_check_anti_pt(const struct PtsMatrix *h,
                                 const double *signs,
                                 size_t n,
                                 double tol,
                                 struct PtsVerdict *out);

// PT check with an arbitrary invertible parity matrix.
enum PtsStatus pts_check_pt_matrix(const struct PtsMatrix *h,
                                   const struct PtsMatrix *parity,
                                   double tol,
                                   struct PtsVerdict *out);

enum PtsStatus pts_check_anti_pt_matrix(const struct PtsMatrix *h,
                                        const struct PtsMatrix *parity,
                                        double tol,
                                        struct PtsVerdict *out);

// Checks `[H, A] = 0` for an invertible linear operator `A`.
enum PtsStatus pts_check_commutes(const struct PtsMatrix *h,
                                  const struct PtsMatrix *op,
                                  double tol,
                                  struct PtsVerdict *out);

enum PtsStatus pts_template_parse(const char *source, struct PtsTemplate **out);

enum PtsStatus pts_template_load(const char *path, struct PtsTemplate **out);

void pts_template_free(struct PtsTemplate *t);

enum PtsStatus pts_template_dim(const struct PtsTemplate *t, size_t *dim);

// Evaluates the template with `n` parameter names and values.
enum PtsStatus pts_template_instantiate(const struct PtsTemplate *t,
                                        const char *const *names,
                                        const double *values,
                                        size_t n,
                                        struct PtsMatrix **out);

// Sweep over a built-in family. Bind the other parameters with
// `pts_sweep_spec_set_const` / `pts_sweep_spec_set_alias`; the spec is
// validated when run.
enum PtsStatus pts_sweep_spec_new_family(uint32_t family,
                                         const char *param,
                                         double lo,
                                         double hi,
                                         size_t steps,
                                         struct PtsSweepSpec **out);

// Sweep over a template. The spec keeps its own reference, so the
// template handle may be freed afterwards.
enum PtsStatus pts_sweep_spec_new_template(const struct PtsTemplate *t,
                                           const char *param,
                                           double lo,
                                           double hi,
                                           size_t steps,
                                           struct PtsSweepSpec **out);

// One of the preset cases 1 to 4.
enum PtsStatus pts_sweep_spec_preset(uint32_t case_, struct PtsSweepSpec **out);

void pts_sweep_spec_free(struct PtsSweepSpec *s);

enum PtsStatus pts_sweep_spec_set_const(struct PtsSweepSpec *s, const char *name, double value);

// Makes `name` follow parameter `target` along the sweep.
enum PtsStatus pts_sweep_spec_set_alias(struct PtsSweepSpec *s,
                                        const char *name,
                                        const char *target);

// `q` is a `PtsQuantity`.
enum PtsStatus pts_sweep_spec_set_quantity(struct PtsSweepSpec *s, uint32_t q);

enum PtsStatus pts_sweep_spec_set_steps(struct PtsSweepSpec *s, size_t steps);

// Exceptional points of the eigenvalues along the sweep, each refined to
// within `refine_tol`.
enum PtsStatus pts_exceptional_points(const struct PtsSweepSpec *s,
                                      double refine_tol,
                                      double *out,
                                      size_t cap,
                                      size_t *len_out);

enum PtsStatus pts_sweep_run(const struct PtsSweepSpec *s, struct PtsSweepResult **out);

void pts_sweep_result_free(struct PtsSweepResult *r);

enum PtsStatus pts_sweep_result_shape(const struct PtsSweepResult *r,
                                      size_t *points,
                                      size_t *branches);

enum PtsStatus pts_sweep_result_grid(const struct PtsSweepResult *r,
                                     double *out,
                                     size_t cap,
                                     size_t *len_out);

// Tracked values of one branch, one per grid point.
enum PtsStatus pts_sweep_result_branch(const struct PtsSweepResult *r,
                                       size_t branch,
                                       double *re,
                                       double *im,
                                       size_t cap,
                                       size_t *len_out);

enum PtsStatus pts_sweep_result_exceptional_points(const struct PtsSweepResult *r,
                                                   double *out,
                                                   size_t cap,
                                                   size_t *len_out);

// Asymmetry at grid point `index`. `has_value` is false where the mirror
// point falls outside the sweep range.
enum PtsStatus pts_sweep_result_asymmetry(const struct PtsSweepResult *r,
                                          size_t index,
                                          bool *has_value,
                                          double *value);

enum PtsStatus pts_sweep_result_to_json(const struct PtsSweepResult *r, char **out);

enum PtsStatus pts_sweep_result_to_csv(const struct PtsSweepResult *r, char **out);

// `which` is a `PtsComponent`.
enum PtsStatus pts_sweep_result_to_svg(const struct PtsSweepResult *r, uint32_t which, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTSYM_H */

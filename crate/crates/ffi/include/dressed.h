#ifndef DRESSED_H
#define DRESSED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The first four match the command-line exit codes.
typedef enum DressedStatus {
  DRESSED_STATUS_OK = 0,
  // Invalid configuration or argument.
  DRESSED_STATUS_CONFIG = 1,
  // Physics or threshold violation.
  DRESSED_STATUS_PHYSICS = 2,
  // Numerical failure.
  DRESSED_STATUS_NUMERICAL = 3,
  DRESSED_STATUS_NULL_POINTER = 4,
  // A Rust panic was caught.
  DRESSED_STATUS_PANIC = 5,
} DressedStatus;

// Opaque model handle.
typedef struct DressedModel DressedModel;

// Atomic ground-state moments in reduced units.
typedef struct DressedMoments {
  double omega_t;
  double omega0_renorm;
  double avg_omega;
  double avg_inv_omega;
  double var_x;
  double var_p;
  double uncertainty_product;
  // In units of `ħΩ₀`.
  double atom_energy;
  double mean_excitation;
  double a_squared;
} DressedMoments;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a model in reduced units (`ħ = 1`, `V² = A ω³ e^{−ω/ω_c}`) and
// tabulates its frequency distribution. On success `*out` receives a
// handle to be released with [`dressed_model_free`].
//
// # Safety
// `out` must be null or valid for writing one pointer.
enum DressedStatus dressed_model_new(double omega0,
                                     double omega_c,
                                     double amplitude,
                                     struct DressedModel **out);

// Releases a handle; null is ignored.
//
// # Safety
// `model` must be null or a handle from [`dressed_model_new`] not yet freed.
void dressed_model_free(struct DressedModel *model);

// `∫π dω` as tabulated.
//
// # Safety
// `model` must be a live handle; `out` valid for writing.
enum DressedStatus dressed_model_pi_norm(const struct DressedModel *model, double *out);

// # Safety
// `model` must be a live handle; `out` valid for writing.
enum DressedStatus dressed_model_moments(const struct DressedModel *model,
                                         struct DressedMoments *out);

// Virtual-photon density `N(ω)`.
//
// # Safety
// `model` must be a live handle; `out` valid for writing.
enum DressedStatus dressed_model_photon_density(const struct DressedModel *model,
                                                double omega,
                                                double *out);

// `⟨(a+a†)(b(ω)+b†(ω))⟩` and `⟨[−i(a−a†)][−i(b(ω)−b†(ω))]⟩`.
//
// # Safety
// `model` must be a live handle; both outputs valid for writing.
enum DressedStatus dressed_model_field_correlations(const struct DressedModel *model,
                                                    double omega,
                                                    double *x_b_plus,
                                                    double *p_b_minus);

// `ln χ` for a purely atomic argument `η = eta_re + i eta_im`.
//
// # Safety
// `model` must be a live handle; `out` valid for writing.
enum DressedStatus dressed_model_log_chi_atomic(const struct DressedModel *model,
                                                double eta_re,
                                                double eta_im,
                                                double *out);

// Ground energy of two oscillators with coupling `g`, `|g| < 1`.
//
// # Safety
// `out` must be valid for writing.
enum DressedStatus dressed_pair_ground_energy(double mass, double omega0, double g, double *out);

// Copies the calling thread's last error message, NUL-terminated and
// truncated to `len` bytes, into `buf`. Returns the full message length
// without the terminator, or 0 if there is no message.
//
// # Safety
// `buf` must be null or valid for writing `len` bytes.
uintptr_t dressed_last_error(char *buf, uintptr_t len);

// Library version as a static NUL-terminated string.
const char *dressed_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRESSED_H */

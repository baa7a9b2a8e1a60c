#ifndef SQSYNTH_H
#define SQSYNTH_H

/* Generated by cbindgen from the sqsynth-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SqEngine {
  SQ_ENGINE_NAIVE = 0,
  SQ_ENGINE_DIFFERENTIAL = 1,
} SqEngine;

typedef enum SqInterpolation {
  SQ_INTERPOLATION_NEAREST = 0,
  SQ_INTERPOLATION_LINEAR = 1,
} SqInterpolation;

typedef enum SqStatus {
  SQ_STATUS_OK = 0,
  SQ_STATUS_NULL_POINTER = 1,
  SQ_STATUS_INVALID_ARGUMENT = 2,
  SQ_STATUS_NON_FINITE_INPUT = 3,
  SQ_STATUS_BAD_LENGTH = 4,
  SQ_STATUS_NYQUIST_ENERGY = 5,
  SQ_STATUS_NONADMISSIBLE = 6,
  SQ_STATUS_TOO_MANY_TERMS = 7,
  SQ_STATUS_WRONG_BASIS_KIND = 8,
  SQ_STATUS_BUFFER_TOO_SMALL = 9,
  SQ_STATUS_FORMAT = 10,
  SQ_STATUS_IO = 11,
  SQ_STATUS_PANIC = 12,
} SqStatus;

typedef struct SqBasis SqBasis;

typedef struct SqDecomposition SqDecomposition;

/**
 * A polar spectrum of one period.
 */
typedef struct SqSpectrum SqSpectrum;

/**
 * Render settings. A `filter_cutoff` of zero or below disables the
 * low-pass filter.
 */
typedef struct SqRenderConfig {
  size_t samples_per_period;
  size_t periods;
  size_t oversample;
  double filter_cutoff;
  bool decimate;
} SqRenderConfig;

typedef struct SqStats {
  uint64_t adds;
  uint64_t multiplies;
  uint64_t table_reads;
  uint64_t interpolations;
  uint64_t sign_flips;
  uint64_t samples_rendered;
} SqStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sq_last_error(void);

/**
 * Analyzes one period of `len` samples.
 *
 * # Safety
 * `samples` must point to `len` readable doubles and `out` must be writable.
 */
enum SqStatus sq_spectrum_analyze(const double *samples, size_t len, struct SqSpectrum **out);

/**
 * Builds a spectrum from a constant and `count` (module, phase) pairs for
 * harmonics 1..=count.
 *
 * # Safety
 * `modules` and `phases` must each point to `count` readable doubles.
 */
enum SqStatus sq_spectrum_new(double c0,
                              const double *modules,
                              const double *phases,
                              size_t count,
                              struct SqSpectrum **out);

/**
 * # Safety
 * `spec` must be a live handle or NULL.
 */
size_t sq_spectrum_harmonic_count(const struct SqSpectrum *spec);

/**
 * # Safety
 * `spec` must be a live handle or NULL.
 */
double sq_spectrum_c0(const struct SqSpectrum *spec);

/**
 * Reads harmonic `k` (1-based). Harmonics beyond the stored range are zero.
 *
 * # Safety
 * `spec` must be a live handle; `module` and `phase` must be writable.
 */
enum SqStatus sq_spectrum_bin(const struct SqSpectrum *spec,
                              size_t k,
                              double *module,
                              double *phase);

/**
 * Synthesizes one period of `len` samples into `out`.
 *
 * # Safety
 * `spec` must be a live handle and `out` must point to `len` writable doubles.
 */
enum SqStatus sq_spectrum_synthesize(const struct SqSpectrum *spec, double *out, size_t len);

/**
 * # Safety
 * `spec` must be a handle from this library or NULL; it is invalid afterwards.
 */
void sq_spectrum_free(struct SqSpectrum *spec);

/**
 * The analytic square wave, truncated at `harmonic_budget` harmonics.
 *
 * # Safety
 * `out` must be writable.
 */
enum SqStatus sq_basis_square(size_t harmonic_budget, struct SqBasis **out);

/**
 * The two-level square wave as sampled on a grid of `len` points.
 *
 * # Safety
 * `out` must be writable.
 */
enum SqStatus sq_basis_sampled_square(size_t len, struct SqBasis **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SqStatus sq_basis_sine(struct SqBasis **out);

/**
 * A tabulated basis from one period of samples. The mean is removed.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `samples` must point to `len`
 * readable doubles and `out` must be writable.
 */
enum SqStatus sq_basis_from_samples(const char *name,
                                    const double *samples,
                                    size_t len,
                                    struct SqBasis **out);

/**
 * Admissibility margin `s_1² − Σ_{p≥2} s_p²`; NaN for a NULL handle.
 *
 * # Safety
 * `basis` must be a live handle or NULL.
 */
double sq_basis_margin(const struct SqBasis *basis);

/**
 * # Safety
 * `basis` must be a handle from this library or NULL; it is invalid afterwards.
 */
void sq_basis_free(struct SqBasis *basis);

/**
 * Deconstructs `spec` onto `basis`, solving up to `max_terms` terms and
 * stopping early once the residual norm drops to `rms_eps` (when positive).
 *
 * # Safety
 * `spec` and `basis` must be live handles and `out` must be writable.
 */
enum SqStatus sq_deconstruct(const struct SqSpectrum *spec,
                             const struct SqBasis *basis,
                             size_t max_terms,
                             double rms_eps,
                             bool strict,
                             struct SqDecomposition **out);

/**
 * # Safety
 * `d` must be a live handle or NULL.
 */
size_t sq_decomposition_term_count(const struct SqDecomposition *d);

/**
 * # Safety
 * `d` must be a live handle or NULL.
 */
double sq_decomposition_c0(const struct SqDecomposition *d);

/**
 * # Safety
 * `d` must be a live handle or NULL.
 */
bool sq_decomposition_converged(const struct SqDecomposition *d);

/**
 * Reads term `index` (0-based) as its frequency multiple, module and phase.
 *
 * # Safety
 * `d` must be a live handle; the output pointers must be writable.
 */
enum SqStatus sq_decomposition_term(const struct SqDecomposition *d,
                                    size_t index,
                                    size_t *n,
                                    double *module,
                                    double *phase);

/**
 * Number of residual trace entries, one more than the term count.
 *
 * # Safety
 * `d` must be a live handle or NULL.
 */
size_t sq_decomposition_trace_len(const struct SqDecomposition *d);

/**
 * Copies the residual trace into `out`, which must hold
 * `sq_decomposition_trace_len` entries.
 *
 * # Safety
 * `d` must be a live handle and `out` must point to `capacity` writable doubles.
 */
enum SqStatus sq_decomposition_trace(const struct SqDecomposition *d, double *out, size_t capacity);

/**
 * Serializes to the decomposition file format. Release the string with
 * `sq_string_free`.
 *
 * # Safety
 * `d` must be a live handle and `out` must be writable.
 */
enum SqStatus sq_decomposition_to_json(const struct SqDecomposition *d, char **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum SqStatus sq_decomposition_from_json(const char *json, struct SqDecomposition **out);

/**
 * Spectrum of the decomposition's reconstruction over `bins` harmonics.
 *
 * # Safety
 * `d` and `basis` must be live handles and `out` must be writable.
 */
enum SqStatus sq_decomposition_spectrum(const struct SqDecomposition *d,
                                        const struct SqBasis *basis,
                                        size_t bins,
                                        struct SqSpectrum **out);

/**
 * # Safety
 * `d` must be a handle from this library or NULL; it is invalid afterwards.
 */
void sq_decomposition_free(struct SqDecomposition *d);

/**
 * # Safety
 * `s` must be a string returned by this library or NULL.
 */
void sq_string_free(char *s);

/**
 * Number of samples a render with `cfg` produces.
 *
 * # Safety
 * `cfg` and `len` must be valid pointers.
 */
enum SqStatus sq_render_len(const struct SqRenderConfig *cfg, size_t *len);

/**
 * Renders a square-wave decomposition with the naive or differential engine.
 * `written` and `stats` may be NULL.
 *
 * # Safety
 * `d` must be a live handle, `cfg` a valid pointer and `out` must point to
 * `capacity` writable doubles.
 */
enum SqStatus sq_render_squares(const struct SqDecomposition *d,
                                enum SqEngine engine,
                                const struct SqRenderConfig *cfg,
                                double *out,
                                size_t capacity,
                                size_t *written,
                                struct SqStats *stats);

/**
 * Renders a spectrum with the wavetable oscillator bank.
 *
 * # Safety
 * As for `sq_render_squares`, with `spec` a live spectrum handle.
 */
enum SqStatus sq_render_fourier(const struct SqSpectrum *spec,
                                const struct SqRenderConfig *cfg,
                                size_t lut_size,
                                enum SqInterpolation interpolation,
                                double *out,
                                size_t capacity,
                                size_t *written,
                                struct SqStats *stats);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQSYNTH_H */

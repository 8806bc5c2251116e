#ifndef TWOSCALE_H
#define TWOSCALE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_ARGUMENT = 2,
  TS_STATUS_EXHAUSTED_STREAM = 3,
  TS_STATUS_OUT_OF_DOMAIN = 4,
  TS_STATUS_NONPOSITIVE_COEFFICIENT = 5,
  TS_STATUS_GRID_MISMATCH = 6,
  TS_STATUS_NO_CONVERGENCE = 7,
  TS_STATUS_BOUNDS_VIOLATION = 8,
  TS_STATUS_IO = 9,
  TS_STATUS_PANIC = 10,
} TsStatus;

typedef struct TsByteStream TsByteStream;

typedef struct TsCoeff1d TsCoeff1d;

typedef struct TsCoeff2d TsCoeff2d;

/**
 * Symmetric 2x2 tensor.
 */
typedef struct TsTensor2 {
  double a11;
  double a12;
  double a22;
} TsTensor2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ts_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ts_version(void);

/**
 * Byte stream over a copy of `len` bytes at `bytes`.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be writable.
 */
enum TsStatus ts_byte_stream_new(const uint8_t *bytes, size_t len, struct TsByteStream **out);

/**
 * Byte stream over the bundled fixture file.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_byte_stream_fixture(struct TsByteStream **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum TsStatus ts_byte_stream_open(const char *path, struct TsByteStream **out);

/**
 * Next `xi` in [0, 1].
 *
 * # Safety
 * `stream` must come from a `ts_byte_stream_*` constructor; `out` must be writable.
 */
enum TsStatus ts_byte_stream_next(struct TsByteStream *stream, double *out);

/**
 * # Safety
 * `stream` must be null or a live handle; it is invalid afterwards.
 */
void ts_byte_stream_free(struct TsByteStream *stream);

/**
 * Random 1D coefficient; `case_index` is 1, 2 or 3. Draws from `stream`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum TsStatus ts_coeff1d_build(struct TsByteStream *stream,
                               uint32_t case_index,
                               struct TsCoeff1d **out);

/**
 * # Safety
 * `coeff` must be live; `out` must be writable.
 */
enum TsStatus ts_coeff1d_eval(const struct TsCoeff1d *coeff, double x, double *out);

/**
 * Harmonic mean over the window of `x`; `k = 0` selects the continuous
 * extension, `k >= 1` the discrete one with `k` cells per window.
 *
 * # Safety
 * `coeff` must be live; `out` must be writable.
 */
enum TsStatus ts_coeff1d_averaged(const struct TsCoeff1d *coeff,
                                  uint32_t k,
                                  double epsbar,
                                  double x,
                                  double *out);

/**
 * # Safety
 * `coeff` must be null or a live handle; it is invalid afterwards.
 */
void ts_coeff1d_free(struct TsCoeff1d *coeff);

/**
 * The smooth six-term coefficient.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_coeff2d_mingyue(struct TsCoeff2d **out);

/**
 * `10^(beta S)` with `n_sin` modes drawn from `stream`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum TsStatus ts_coeff2d_random_sines(struct TsByteStream *stream,
                                      size_t n_sin,
                                      double contrast,
                                      struct TsCoeff2d **out);

/**
 * # Safety
 * `coeff` must be live; `out` must be writable.
 */
enum TsStatus ts_coeff2d_eval(const struct TsCoeff2d *coeff, double x1, double x2, double *out);

/**
 * # Safety
 * `coeff` must be null or a live handle; it is invalid afterwards.
 */
void ts_coeff2d_free(struct TsCoeff2d *coeff);

/**
 * Effective tensor of an `n x n` periodic window (`samples[j * n + i]`),
 * plus the asymmetry `|A12 - A21|` before symmetrisation (may be null).
 *
 * # Safety
 * `samples` must point to `n * n` doubles; outputs must be writable.
 */
enum TsStatus ts_cell_tensor(const double *samples,
                             size_t n,
                             struct TsTensor2 *out,
                             double *asymmetry);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOSCALE_H */

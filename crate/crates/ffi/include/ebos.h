#ifndef EBOS_H
#define EBOS_H

#include <stddef.h>
#include <stdint.h>

typedef enum EbosStatus {
  EBOS_STATUS_OK = 0,
  EBOS_STATUS_NULL_POINTER = 1,
  EBOS_STATUS_INVALID_ARGUMENT = 2,
  EBOS_STATUS_DIMENSION_MISMATCH = 3,
  EBOS_STATUS_INVALID_PARTITION = 4,
  EBOS_STATUS_NON_FINITE = 5,
  EBOS_STATUS_NOT_ORTHOGONAL = 6,
  EBOS_STATUS_NUMERICAL_FAILURE = 7,
  EBOS_STATUS_PARSE = 8,
  EBOS_STATUS_IO = 9,
  // A Rust panic was caught at the boundary.
  EBOS_STATUS_INTERNAL = 10,
} EbosStatus;

typedef enum EbosMethod {
  EBOS_METHOD_EBOS = 0,
  EBOS_METHOD_DIRECT = 1,
  EBOS_METHOD_INDEPENDENT = 2,
} EbosMethod;

// Opaque matrix handle.
typedef struct EbosMatrix EbosMatrix;

// Operation counts for one problem size; see `ebos::flops::FlopReport`.
typedef struct EbosFlops {
  double n1;
  double n2;
  double n3;
  double n_total;
  double f_direct;
  double ratio;
} EbosFlops;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or an empty string.
// The pointer stays valid until the next `ebos_*` call on the same thread.
const char *ebos_last_error_message(void);

// Static name of a status code; unknown codes give `"unknown status"`.
const char *ebos_status_name(int32_t status);

// Creates a `rows x cols` matrix from `rows * cols` row-major values, or
// zeros when `data` is null.
//
// # Safety
// `data`, if non-null, must point to `rows * cols` readable doubles and
// `out` must be a valid pointer.
enum EbosStatus ebos_matrix_new(size_t rows,
                                size_t cols,
                                const double *data,
                                struct EbosMatrix **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `m` must be null or a handle from this library not yet freed.
void ebos_matrix_free(struct EbosMatrix *m);

// Row count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t ebos_matrix_rows(const struct EbosMatrix *m);

// Column count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t ebos_matrix_cols(const struct EbosMatrix *m);

// Copies the entries in row-major order into `buf`, which holds `len`
// doubles; `len` must be at least `rows * cols`.
//
// # Safety
// `m` must be a live handle and `buf` must be writable for `len` doubles.
enum EbosStatus ebos_matrix_copy_data(const struct EbosMatrix *m, double *buf, size_t len);

// Reads a whitespace- or comma-separated text matrix.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum EbosStatus ebos_matrix_read(const char *path, struct EbosMatrix **out);

// Writes a matrix as text, one row per line.
//
// # Safety
// `m` must be a live handle and `path` a NUL-terminated string.
enum EbosStatus ebos_matrix_write(const struct EbosMatrix *m, const char *path);

// Moore-Penrose pseudo-inverse. A negative `tol` selects the automatic
// singular-value cutoff.
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum EbosStatus ebos_pinv(const struct EbosMatrix *m, double tol, struct EbosMatrix **out);

// Solves `min ‖A - B X C‖_F`. `gpart` lists the column block widths of
// `B`, `hpart` the row block heights of `C`. `method` is an [`EbosMethod`]
// value. A negative `tol` selects the automatic cutoff. `out_residual` may
// be null.
//
// # Safety
// Handles must be live, partition arrays readable for their lengths and
// `out_x` a valid pointer.
enum EbosStatus ebos_solve(const struct EbosMatrix *a,
                           const struct EbosMatrix *b,
                           const struct EbosMatrix *c,
                           const size_t *gpart,
                           size_t gpart_len,
                           const size_t *hpart,
                           size_t hpart_len,
                           uint32_t method,
                           double tol,
                           struct EbosMatrix **out_x,
                           double *out_residual);

// Operation counts of both methods for `A` of size `m x n` and `C` with
// `h` rows in `q` blocks.
//
// # Safety
// `out` must be a valid pointer.
enum EbosStatus ebos_flops(uint64_t m, uint64_t n, uint64_t h, uint64_t q, struct EbosFlops *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EBOS_H */

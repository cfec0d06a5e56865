#ifndef FOURLEVEL_H
#define FOURLEVEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_NULL_POINTER = 1,
  FM_STATUS_INVALID_ARGUMENT = 2,
  FM_STATUS_INVALID_PAIR = 3,
  FM_STATUS_INVALID_STATE = 4,
  FM_STATUS_NOT_SYMMETRIC = 5,
  FM_STATUS_DEGENERATE_INPUT = 6,
  FM_STATUS_NOT_LADDER = 7,
  FM_STATUS_INVALID_COORDINATES = 8,
  FM_STATUS_DISCONNECTED_SECTOR = 9,
  FM_STATUS_NO_DYNAMICS = 10,
  FM_STATUS_NUMERICAL_FAILURE = 11,
  FM_STATUS_NO_CONVERGENCE = 12,
  FM_STATUS_INDEX_OUT_OF_RANGE = 13,
  FM_STATUS_PANIC = 14,
} FmStatus;

/**
 * Opaque optimizer result from [`fm_design_search`].
 */
typedef struct FmDesign FmDesign;

/**
 * Opaque time series from [`fm_series_new`].
 */
typedef struct FmSeries FmSeries;

typedef struct FmCouplings {
  double v12;
  double v23;
  double v34;
  double v14;
} FmCouplings;

typedef struct FmHopf {
  double xi0;
  double xi1;
  double xi2;
  double xi3;
} FmHopf;

/**
 * Mode amplitudes `a1..a4` split into real and imaginary parts.
 */
typedef struct FmAmplitudes {
  double re[4];
  double im[4];
} FmAmplitudes;

/**
 * `vL tau = q pi/2`, `vR tau = p pi/2`.
 */
typedef struct FmTransfer {
  double tau;
  uint64_t p;
  uint64_t q;
  double omega;
  double v_l;
  double v_r;
} FmTransfer;

typedef struct FmTriple {
  uint64_t a;
  uint64_t b;
  uint64_t c;
} FmTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next `fm_` call on the same thread.
 */
const char *fm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fm_version(void);

enum FmStatus fm_hopf_map(const struct FmCouplings *c, struct FmHopf *out);

/**
 * Real amplitudes `a1(t)`, `a3(t)` starting from mode 1.
 */
enum FmStatus fm_closed_form(const struct FmCouplings *c, double t, double *a1, double *a3);

/**
 * Evolves `psi0` to time `t` through the factored propagator.
 */
enum FmStatus fm_propagate(const struct FmCouplings *c,
                           const struct FmAmplitudes *psi0,
                           double t,
                           struct FmAmplitudes *out);

/**
 * Evolves `psi0` to time `t` by diagonalizing the 4x4 Hamiltonian.
 */
enum FmStatus fm_oracle_propagate(const struct FmCouplings *c,
                                  const struct FmAmplitudes *psi0,
                                  double t,
                                  struct FmAmplitudes *out);

/**
 * First complete 1->3 transfer time. `*found` is false when the couplings
 * never transfer completely.
 */
enum FmStatus fm_transfer_time(const struct FmCouplings *c,
                               double tol,
                               struct FmTransfer *out,
                               bool *found);

enum FmStatus fm_euclid_triple(uint64_t p, uint64_t q, struct FmTriple *out);

/**
 * Writes up to `cap` primitive triples with hypotenuse at most `c_max`
 * into `buf` and the total count into `*count`. Pass `buf = NULL` and
 * `cap = 0` to query the count.
 */
enum FmStatus fm_triples(uint64_t c_max, struct FmTriple *buf, size_t cap, size_t *count);

/**
 * Ladder couplings whose first complete transfer happens at `tau`.
 */
enum FmStatus fm_couplings_from_pair(uint64_t p,
                                     uint64_t q,
                                     double tau,
                                     struct FmCouplings *out,
                                     struct FmTransfer *solution);

/**
 * Checks the Pythagorean transfer condition. `triple` and `solution` may be
 * null; they are written only when `*found` is true.
 */
enum FmStatus fm_detect(const struct FmCouplings *c,
                        double tol,
                        struct FmTriple *triple,
                        struct FmTransfer *solution,
                        bool *found);

/**
 * Samples the evolution from mode 1 on `steps + 1` uniform points of
 * `[0, t_max]`.
 */
enum FmStatus fm_series_new(const struct FmCouplings *c,
                            double t_max,
                            size_t steps,
                            struct FmSeries **out);

/**
 * Number of samples, or 0 for a null handle.
 */
size_t fm_series_len(const struct FmSeries *s);

enum FmStatus fm_series_get(const struct FmSeries *s,
                            size_t index,
                            double *t,
                            struct FmAmplitudes *amplitudes);

void fm_series_free(struct FmSeries *s);

/**
 * Multistart search for couplings reaching mode 3 at `tau`, every coupling
 * bounded to `[lo, hi]`. `diamond` also frees `v14`. `starts = 0` picks
 * the default.
 */
enum FmStatus fm_design_search(double tau,
                               double lo,
                               double hi,
                               uint64_t seed,
                               size_t starts,
                               bool diamond,
                               struct FmDesign **out);

enum FmStatus fm_design_couplings(const struct FmDesign *d, struct FmCouplings *out);

/**
 * `1 - |a3(tau)|²` at the returned couplings, or NaN for a null handle.
 */
double fm_design_infidelity(const struct FmDesign *d);

enum FmStatus fm_design_match(const struct FmDesign *d,
                              struct FmTriple *triple,
                              struct FmTransfer *solution,
                              bool *found);

void fm_design_free(struct FmDesign *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOURLEVEL_H */

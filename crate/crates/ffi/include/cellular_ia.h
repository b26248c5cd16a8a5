#ifndef CELLULAR_IA_H
#define CELLULAR_IA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum {
  IA_STATUS_OK = 0,
  IA_STATUS_INVALID_CONFIG = 1,
  IA_STATUS_INFEASIBLE_ANTENNAS = 2,
  IA_STATUS_SINGULAR_CONSTRUCTION = 3,
  IA_STATUS_EMPTY_NULL_SPACE = 4,
  IA_STATUS_ZERO_MATRIX = 5,
  IA_STATUS_NOT_HERMITIAN = 6,
  IA_STATUS_DIMENSION_MISMATCH = 7,
  IA_STATUS_UNKNOWN_APPROACH = 8,
  IA_STATUS_MISSING_CODEBOOK = 9,
  IA_STATUS_INSUFFICIENT_POINTS = 10,
  IA_STATUS_SCENARIO = 11,
  IA_STATUS_IO = 12,
  IA_STATUS_NULL_POINTER = 13,
  IA_STATUS_INVALID_ARGUMENT = 14,
  IA_STATUS_PANIC = 15,
} IaStatus;

/**
 * One channel realization.
 */
typedef struct IaChannels IaChannels;

/**
 * Precoders and receive filters of one design.
 */
typedef struct IaCoders IaCoders;

/**
 * Network dimensions and antenna counts.
 */
typedef struct IaConfig IaConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ia_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ia_version(void);

/**
 * Parses a configuration from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
IaStatus ia_config_from_json(const char *json, IaConfig **out);

/**
 * Configuration of the full-connected or two-side cyclic topology.
 * `topology` is `full_connected` or `cyclic_two_side`.
 *
 * # Safety
 * `topology` must be a NUL-terminated string and `out` a writable pointer.
 */
IaStatus ia_config_uniform(const char *topology,
                           size_t k,
                           size_t m,
                           size_t d,
                           size_t n_t,
                           size_t n_r,
                           IaConfig **out);

/**
 * Configuration of the one-side edge topology.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
IaStatus ia_config_one_side(size_t k,
                            size_t m_star,
                            size_t m_edge,
                            size_t d,
                            size_t n_t,
                            size_t n_r_star,
                            size_t n_r_edge,
                            IaConfig **out);

/**
 * # Safety
 * `cfg` must come from an `ia_config_*` constructor or be null.
 */
void ia_config_free(IaConfig *cfg);

/**
 * Draws every channel matrix of `cfg` from `seed`.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a writable pointer.
 */
IaStatus ia_channels_generate(const IaConfig *cfg, uint64_t seed, IaChannels **out);

/**
 * # Safety
 * `ch` must come from [`ia_channels_generate`] or be null.
 */
void ia_channels_free(IaChannels *ch);

/**
 * Designs coders with approach `approach_id` (`A`..`F`, `a`..`e`).
 * Option `d` draws `codebook_size` candidates per cell from
 * `codebook_seed`; other approaches need `codebook_size` = 0.
 *
 * # Safety
 * `ch` must be a live handle, `approach_id` a NUL-terminated string and
 * `out` a writable pointer.
 */
IaStatus ia_design(const IaChannels *ch,
                   const char *approach_id,
                   uint64_t seed,
                   size_t codebook_size,
                   uint64_t codebook_seed,
                   IaCoders **out);

/**
 * # Safety
 * `coders` must come from [`ia_design`] or be null.
 */
void ia_coders_free(IaCoders *coders);

/**
 * Copies the precoder of user (`cell`, `user`) into `re` and `im`, column
 * major, and its shape into `rows` and `cols`. With null buffers only the
 * shape is written; otherwise each buffer must hold `len` ≥ rows·cols values.
 *
 * # Safety
 * Non-null pointers must be writable for the stated lengths.
 */
IaStatus ia_coders_precoder(const IaCoders *coders,
                            size_t cell,
                            size_t user,
                            double *re,
                            double *im,
                            size_t len,
                            size_t *rows,
                            size_t *cols);

/**
 * Number of boundary cells a chain design left unaligned, and optionally
 * the cells themselves (`cells` holding at least `len` entries).
 *
 * # Safety
 * `count` must be writable; `cells` may be null.
 */
IaStatus ia_coders_boundary_cells(const IaCoders *coders, size_t *cells, size_t len, size_t *count);

/**
 * Largest normalized residual interference over all users and the total
 * residual interference power.
 *
 * # Safety
 * Handles must be live; `max_residual` and `total_leakage` writable.
 */
IaStatus ia_leakage(const IaChannels *ch,
                    const IaCoders *coders,
                    double *max_residual,
                    double *total_leakage);

/**
 * Sum rate in bits per channel use at `snr_db`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
IaStatus ia_sum_rate(const IaChannels *ch, const IaCoders *coders, double snr_db, double *out);

/**
 * Tabulated minimum antenna counts of `approach_id` for the dimensions of
 * `cfg`. Uniform topologies write the same MS count to both outputs.
 *
 * # Safety
 * `cfg` must be live, `approach_id` NUL-terminated and outputs writable.
 */
IaStatus ia_min_antennas(const IaConfig *cfg,
                         const char *approach_id,
                         uint64_t *bs,
                         uint64_t *ms_interior,
                         uint64_t *ms_edge);

/**
 * Antenna, CSI and complexity row as JSON. `codebook_size` 0 means none.
 *
 * # Safety
 * `cfg` must be live, `approach_id` NUL-terminated and `out` writable.
 * Release the string with [`ia_string_free`].
 */
IaStatus ia_resource_report_json(const IaConfig *cfg,
                                 const char *approach_id,
                                 size_t codebook_size,
                                 char **out);

/**
 * Runs a scenario given as JSON in memory, serially, and returns the
 * results document. Nothing is written to disk.
 *
 * # Safety
 * `scenario_json` must be NUL-terminated and `out` writable. Release the
 * string with [`ia_string_free`].
 */
IaStatus ia_run_scenario_json(const char *scenario_json, char **out);

/**
 * # Safety
 * `s` must be a string returned by this library or null.
 */
void ia_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CELLULAR_IA_H */

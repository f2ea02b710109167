/* Copyright 2026 The actopt Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef ACTOPT_H
#define ACTOPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AoStatus {
  AO_STATUS_OK = 0,
  AO_STATUS_NULL_ARGUMENT,
  AO_STATUS_INVALID_UTF8,
  AO_STATUS_PARSE_ERROR,
  AO_STATUS_SIM_ERROR,
  AO_STATUS_PROFILE_MISMATCH,
  AO_STATUS_ZERO_BASELINE,
  AO_STATUS_INVALID_CONFIG,
  AO_STATUS_UNKNOWN_NET,
  AO_STATUS_PANIC,
} AoStatus;

typedef enum AoThresholdMode {
  AO_THRESHOLD_MODE_MEDIAN = 0,
  AO_THRESHOLD_MODE_PERCENTILE,
  AO_THRESHOLD_MODE_ABSOLUTE,
} AoThresholdMode;

typedef enum AoVerdict {
  AO_VERDICT_EQUIVALENT = 0,
  AO_VERDICT_MISMATCH,
  AO_VERDICT_INCONCLUSIVE,
} AoVerdict;

/**
 * Parsed netlist.
 */
typedef struct AoNetlist AoNetlist;

/**
 * Per-net toggle counters.
 */
typedef struct AoProfile AoProfile;

typedef struct AoOptConfig {
  enum AoThresholdMode threshold_mode;
  /**
   * Percentile in (0, 100) or absolute toggle count; ignored for the median.
   */
  double threshold_value;
  bool shannon_split;
  bool driver_duplicate;
  /**
   * Negative means unlimited.
   */
  double max_area_growth_pct;
  size_t min_fanout_for_duplication;
} AoOptConfig;

typedef struct AoPowerConfig {
  double supply_voltage;
  double clock_freq;
  double c_base;
  double c_per_fanout;
  double c_dup_overhead;
  double fanout_exponent;
} AoPowerConfig;

typedef struct AoPowerSummary {
  double baseline_w;
  double optimized_w;
  size_t baseline_luts;
  size_t optimized_luts;
  /**
   * Positive is power saved.
   */
  double power_pct;
  /**
   * Positive is area grown.
   */
  double area_pct;
} AoPowerSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next call
 * into this library from the same thread; never null.
 */
const char *ao_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ao_string_free(char *s);

/**
 * Parse BLIF text into a new netlist handle.
 *
 * # Safety
 * `blif` must be a NUL-terminated string; `out` must be writable.
 */
enum AoStatus ao_netlist_parse(const char *blif, struct AoNetlist **out);

/**
 * # Safety
 * `nl` must come from this library and not have been freed. Null is ignored.
 */
void ao_netlist_free(struct AoNetlist *nl);

/**
 * Canonical BLIF text of a netlist; free with [`ao_string_free`].
 *
 * # Safety
 * `nl` must be a live handle; `out` must be writable.
 */
enum AoStatus ao_netlist_emit(const struct AoNetlist *nl, char **out);

/**
 * LUT count (cells with at least one input); 0 for null.
 *
 * # Safety
 * `nl` must be null or a live handle.
 */
size_t ao_netlist_area_luts(const struct AoNetlist *nl);

/**
 * Simulate under generated random stimulus.
 *
 * # Safety
 * `nl` must be a live handle; `out` must be writable.
 */
enum AoStatus ao_simulate(const struct AoNetlist *nl,
                          uint64_t cycles,
                          uint64_t seed,
                          struct AoProfile **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AoStatus ao_profile_read(const char *text, struct AoProfile **out);

/**
 * Profile text; free with [`ao_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum AoStatus ao_profile_write(const struct AoProfile *p, char **out);

/**
 * Toggle count of one net.
 *
 * # Safety
 * `p` must be a live handle, `net` a NUL-terminated string, `out` writable.
 */
enum AoStatus ao_profile_counter(const struct AoProfile *p, const char *net, uint64_t *out);

/**
 * # Safety
 * `p` must come from this library and not have been freed. Null is ignored.
 */
void ao_profile_free(struct AoProfile *p);

struct AoOptConfig ao_opt_config_default(void);

struct AoPowerConfig ao_power_config_default(void);

/**
 * Run the optimization pass. `report` (optional, may be null) receives the
 * pass report text; free it with [`ao_string_free`].
 *
 * # Safety
 * Handles must be live, `cfg` valid, `out` writable, `report` null or writable.
 */
enum AoStatus ao_run_pass(const struct AoNetlist *nl,
                          const struct AoProfile *profile,
                          const struct AoOptConfig *cfg,
                          struct AoNetlist **out,
                          char **report);

/**
 * Modeled power of `base` and `opt` under one shared generated stimulus.
 *
 * # Safety
 * Handles must be live, `cfg` valid, `out` writable.
 */
enum AoStatus ao_compare_power(const struct AoNetlist *base,
                               const struct AoNetlist *opt,
                               uint64_t cycles,
                               uint64_t seed,
                               const struct AoPowerConfig *cfg,
                               struct AoPowerSummary *out);

/**
 * Equivalence check: exhaustive for small combinational netlists, otherwise
 * lockstep over `cycles` generated cycles. `coverage` may be null.
 *
 * # Safety
 * Handles must be live, `verdict` writable, `coverage` null or writable.
 */
enum AoStatus ao_check_equiv(const struct AoNetlist *a,
                             const struct AoNetlist *b,
                             uint64_t cycles,
                             uint64_t seed,
                             enum AoVerdict *verdict,
                             uint64_t *coverage);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACTOPT_H */

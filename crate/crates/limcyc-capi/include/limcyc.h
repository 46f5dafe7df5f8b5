/* C interface of the limcyc limit-cycle toolkit. */

#ifndef LIMCYC_H
#define LIMCYC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LimcycStability {
  LIMCYC_STABILITY_UNDETERMINED = 0,
  LIMCYC_STABILITY_ATTRACTING = 1,
  LIMCYC_STABILITY_REPELLING = 2,
} LimcycStability;

/**
 * Result code of every fallible C-ABI call.
 */
typedef enum LimcycStatus {
  LIMCYC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LIMCYC_STATUS_ERR_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LIMCYC_STATUS_ERR_UTF8 = 2,
  /**
   * Expression or JSON input failed to parse or validate.
   */
  LIMCYC_STATUS_ERR_PARSE = 3,
  /**
   * A numeric argument violated a precondition.
   */
  LIMCYC_STATUS_ERR_INVALID_ARGUMENT = 4,
  /**
   * A denominator was singular at the requested point.
   */
  LIMCYC_STATUS_ERR_SINGULAR = 5,
  /**
   * The return map is undefined from the requested seed.
   */
  LIMCYC_STATUS_ERR_NO_RETURN = 6,
  /**
   * Internal consistency failure (stability indicators disagree or a
   * family closed form does not match).
   */
  LIMCYC_STATUS_ERR_INCONSISTENT = 7,
  /**
   * Index out of range.
   */
  LIMCYC_STATUS_ERR_RANGE = 8,
} LimcycStatus;

/**
 * Opaque set of detected cycles.
 */
typedef struct LimcycCycleSet LimcycCycleSet;

/**
 * Opaque planar vector field handle.
 */
typedef struct LimcycField LimcycField;

/**
 * Opaque integrated-orbit handle.
 */
typedef struct LimcycTrajectory LimcycTrajectory;

/**
 * Summary of one detected cycle.
 */
typedef struct LimcycCycleInfo {
  /**
   * Ordinate of the cycle's crossing of the positive y-axis.
   */
  double y_star;
  double period;
  /**
   * |R'(y*)|; below 1 for attracting cycles.
   */
  double multiplier;
  /**
   * Integral of the divergence over one period.
   */
  double div_integral;
  enum LimcycStability stability;
  /**
   * Nonzero when the cycle runs counterclockwise.
   */
  int32_t counterclockwise;
  /**
   * Nonzero when every ray from the origin meets the cycle once.
   */
  int32_t star_shaped;
} LimcycCycleInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *limcyc_last_error_message(void);

/**
 * Build a field from a system-spec JSON document:
 * `{"kind": "lienard_phase" | "lienard_plane" | "general",
 *   "f": ..., "g": ..., "P": ..., "Q": ..., "label": ..., "family": ...}`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. The returned handle must be released with [`limcyc_field_free`].
 */
enum LimcycStatus limcyc_field_from_json(const char *json, struct LimcycField **out);

/**
 * Build a general field directly from expression texts for P and Q.
 *
 * # Safety
 * As [`limcyc_field_from_json`].
 */
enum LimcycStatus limcyc_field_from_exprs(const char *p, const char *q, struct LimcycField **out);

/**
 * # Safety
 * `field` must come from a field constructor and not be freed twice.
 */
void limcyc_field_free(struct LimcycField *field);

/**
 * Evaluate (P, Q) at a point.
 *
 * # Safety
 * `field` must be a live handle; `p_out` and `q_out` must be valid.
 */
enum LimcycStatus limcyc_field_eval(const struct LimcycField *field,
                                    double x,
                                    double y,
                                    double *p_out,
                                    double *q_out);

/**
 * Divergence P_x + Q_y at a point.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid.
 */
enum LimcycStatus limcyc_field_divergence(const struct LimcycField *field,
                                          double x,
                                          double y,
                                          double *out);

/**
 * The ray-rotation numerator alpha = P (x Q_x + y Q_y) - Q (x P_x + y P_y).
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid.
 */
enum LimcycStatus limcyc_alpha(const struct LimcycField *field, double x, double y, double *out);

/**
 * The stability operator nu = alpha / (y P - x Q). Fails with a singular
 * status where the denominator vanishes.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid.
 */
enum LimcycStatus limcyc_nu(const struct LimcycField *field, double x, double y, double *out);

/**
 * Angular speed (x Q - y P) / (x^2 + y^2).
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid.
 */
enum LimcycStatus limcyc_angular_speed(const struct LimcycField *field,
                                       double x,
                                       double y,
                                       double *out);

/**
 * Integrate an orbit from (x0, y0) for `t_end` time units.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid. Release the result
 * with [`limcyc_trajectory_free`].
 */
enum LimcycStatus limcyc_integrate(const struct LimcycField *field,
                                   double x0,
                                   double y0,
                                   double t_end,
                                   double rtol,
                                   double atol,
                                   struct LimcycTrajectory **out);

/**
 * Number of stored samples (accepted steps plus the initial point).
 *
 * # Safety
 * `trajectory` must be a live handle (or null, which yields 0).
 */
size_t limcyc_trajectory_len(const struct LimcycTrajectory *trajectory);

/**
 * Fetch the i-th stored sample.
 *
 * # Safety
 * `trajectory` must be a live handle; the output pointers must be valid.
 */
enum LimcycStatus limcyc_trajectory_sample(const struct LimcycTrajectory *trajectory,
                                           size_t index,
                                           double *t_out,
                                           double *x_out,
                                           double *y_out);

/**
 * Dense-output state at an arbitrary time inside the covered interval.
 *
 * # Safety
 * `trajectory` must be a live handle; the output pointers must be valid.
 */
enum LimcycStatus limcyc_trajectory_at(const struct LimcycTrajectory *trajectory,
                                       double t,
                                       double *x_out,
                                       double *y_out);

/**
 * # Safety
 * `trajectory` must come from [`limcyc_integrate`] and not be freed twice.
 */
void limcyc_trajectory_free(struct LimcycTrajectory *trajectory);

/**
 * Detect, refine and classify the limit cycles crossing the positive
 * y-axis with ordinates between `y_min` and `y_max`.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid. Release the result
 * with [`limcyc_cycle_set_free`].
 */
enum LimcycStatus limcyc_find_cycles(const struct LimcycField *field,
                                     double y_min,
                                     double y_max,
                                     size_t seeds,
                                     struct LimcycCycleSet **out);

/**
 * Number of detected cycles.
 *
 * # Safety
 * `set` must be a live handle (or null, which yields 0).
 */
size_t limcyc_cycle_set_len(const struct LimcycCycleSet *set);

/**
 * Number of center regions flagged during the search (continua of periodic
 * orbits are reported this way instead of as cycles).
 *
 * # Safety
 * `set` must be a live handle (or null, which yields 0).
 */
size_t limcyc_cycle_set_center_regions(const struct LimcycCycleSet *set);

/**
 * Seeds whose return map was undefined within the time budget.
 *
 * # Safety
 * `set` must be a live handle (or null, which yields 0).
 */
size_t limcyc_cycle_set_skipped_seeds(const struct LimcycCycleSet *set);

/**
 * Summary of the i-th cycle, ascending in y*.
 *
 * # Safety
 * `set` must be a live handle; `out` must be valid.
 */
enum LimcycStatus limcyc_cycle_set_get(const struct LimcycCycleSet *set,
                                       size_t index,
                                       struct LimcycCycleInfo *out);

/**
 * # Safety
 * `set` must come from [`limcyc_find_cycles`] and not be freed twice.
 */
void limcyc_cycle_set_free(struct LimcycCycleSet *set);

/**
 * Run every applicable uniqueness criterion on a system-spec JSON document
 * and return the reports as a JSON array (free with
 * [`limcyc_string_free`]). The scan region is the square
 * [-region_half, region_half]^2 at the given grid resolution.
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string; `out_json` must be a
 * valid pointer.
 */
enum LimcycStatus limcyc_check_criteria_json(const char *spec_json,
                                             double region_half,
                                             size_t resolution,
                                             char **out_json);

/**
 * Detect cycles for a system-spec JSON document and return the full cycle
 * reports (including period samples) as JSON. Free the string with
 * [`limcyc_string_free`].
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string; `out_json` must be a
 * valid pointer.
 */
enum LimcycStatus limcyc_cycles_json(const char *spec_json,
                                     double y_min,
                                     double y_max,
                                     size_t seeds,
                                     char **out_json);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `text` must come from a limcyc function returning `char *` and not be
 * freed twice.
 */
void limcyc_string_free(char *text);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LIMCYC_H */

#ifndef DELTA_NASH_H
#define DELTA_NASH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DnStatus {
  DN_STATUS_OK = 0,
  DN_STATUS_NULL_POINTER = 1,
  DN_STATUS_INVALID_UTF8 = 2,
  /**
   * Input failed validation: scenario text, delta range, budget, options.
   */
  DN_STATUS_INVALID_INPUT = 3,
  DN_STATUS_SOLVER_FAILURE = 4,
  DN_STATUS_PANIC = 5,
} DnStatus;

typedef enum DnOutcome {
  DN_OUTCOME_AGREEMENT = 0,
  DN_OUTCOME_DISAGREEMENT = 1,
  DN_OUTCOME_DEGENERATE = 2,
} DnOutcome;

/**
 * Opaque game handle.
 */
typedef struct DnGame DnGame;

/**
 * Solution of one game. `s_star` and `u_star` are meaningful only when
 * `has_allocation` is true.
 */
typedef struct DnSolution {
  double deltas[2];
  double disagreement[2];
  bool has_allocation;
  double s_star[2];
  double p_star[2];
  double u_star[2];
  double nash_product;
  enum DnOutcome outcome;
  bool boundary_claim_mismatch;
} DnSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `dn_*` call on the same thread.
 */
const char *dn_last_error_message(void);

/**
 * Builds a game from scenario text (TOML). Both deltas must be fixed numbers.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must point to writable
 * storage for one pointer.
 */
enum DnStatus dn_game_from_scenario(const char *text, struct DnGame **out);

/**
 * The profit split over `budget`: `U_i = s_i`, `D_i = s_i - s_j`,
 * disagreement payoffs `(0, 0)`.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum DnStatus dn_game_profit_split(double budget,
                                   double delta1,
                                   double delta2,
                                   struct DnGame **out);

/**
 * Copy of `game` with new deltas.
 *
 * # Safety
 * `game` must be a live handle; `out` must point to writable storage.
 */
enum DnStatus dn_game_with_deltas(const struct DnGame *game,
                                  double delta1,
                                  double delta2,
                                  struct DnGame **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `game` must be null or a handle from a `dn_game_*` constructor that has
 * not been freed.
 */
void dn_game_free(struct DnGame *game);

/**
 * Solves the game with its scenario's solver options.
 *
 * # Safety
 * `game` must be a live handle; `out` must point to a writable `DnSolution`.
 */
enum DnStatus dn_solve(const struct DnGame *game, struct DnSolution *out);

/**
 * Closed-form profit-split solution, defined for `0 < delta <= 1`.
 *
 * # Safety
 * `out` must point to a writable `DnSolution`.
 */
enum DnStatus dn_closed_form(double delta1, double delta2, double budget, struct DnSolution *out);

/**
 * Payoff-space area of the bargaining set. Exact for affine payoffs,
 * otherwise estimated on a `resolution`² raster.
 *
 * # Safety
 * `game` must be a live handle; `area` and `degenerate` must be writable.
 */
enum DnStatus dn_bargaining_area(const struct DnGame *game,
                                 size_t resolution,
                                 double *area,
                                 bool *degenerate);

/**
 * Whether some feasible allocation meets both payoff demands.
 *
 * # Safety
 * `game` must be a live handle; `compatible` must be writable.
 */
enum DnStatus dn_demands_compatible(const struct DnGame *game,
                                    double demand1,
                                    double demand2,
                                    bool *compatible);

/**
 * Library version, static storage.
 */
const char *dn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTA_NASH_H */

#ifndef DILEMMA_H
#define DILEMMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DilemmaKindCode {
  DILEMMA_KIND_CODE_STRICT = 0,
  DILEMMA_KIND_CODE_PARTIAL = 1,
  DILEMMA_KIND_CODE_NOT_DILEMMA = 2,
} DilemmaKindCode;

typedef enum DilemmaStatus {
  DILEMMA_STATUS_OK = 0,
  DILEMMA_STATUS_NOT_A_DILEMMA = 1,
  DILEMMA_STATUS_INFEASIBLE = 2,
  DILEMMA_STATUS_INVALID_INPUT = 3,
  DILEMMA_STATUS_NULL_POINTER = 4,
  DILEMMA_STATUS_INTERNAL = 5,
} DilemmaStatus;

typedef struct DilemmaGame DilemmaGame;

typedef struct DilemmaMatrix DilemmaMatrix;

typedef struct DilemmaResult DilemmaResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *dilemma_last_error(void);

/**
 * Releases a string returned by a `*_to_json` function.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dilemma_string_free(char *s);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_from_json(const char *json, struct DilemmaGame **out);

/**
 * # Safety
 * `game` must be a live handle; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_to_json(const struct DilemmaGame *game, char **out);

/**
 * Builds a game from a flat payoff array of `2^n * n` values, profile index
 * major, where bit `k` of the index is player `k + 1`'s action (1 = defect).
 *
 * # Safety
 * `payoffs` must point to `len` readable doubles; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_from_payoffs(size_t n,
                                             const double *payoffs,
                                             size_t len,
                                             struct DilemmaGame **out);

/**
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_example(const char *name, double epsilon, struct DilemmaGame **out);

/**
 * `graph` is one of cyclical, symmetrical, circular, tycoon; `base` one of
 * pd, chicken, stag-hunt.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_graphical(const char *graph,
                                          const char *base,
                                          size_t n,
                                          double c,
                                          double d,
                                          struct DilemmaGame **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DilemmaStatus dilemma_game_functional(size_t n, double c, struct DilemmaGame **out);

/**
 * Number of players, or 0 for a null handle.
 *
 * # Safety
 * `game` must be null or a live handle.
 */
size_t dilemma_game_players(const struct DilemmaGame *game);

/**
 * Reward of `player` (0-based) at profile index `profile`.
 *
 * # Safety
 * `game` must be a live handle; `out` must be writable.
 */
enum DilemmaStatus dilemma_game_reward(const struct DilemmaGame *game,
                                       size_t profile,
                                       size_t player,
                                       double *out);

/**
 * # Safety
 * `game` must be null or a handle not yet freed.
 */
void dilemma_game_free(struct DilemmaGame *game);

/**
 * # Safety
 * `game` must be a live handle; `out` must be writable.
 */
enum DilemmaStatus dilemma_classify(const struct DilemmaGame *game, enum DilemmaKindCode *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DilemmaStatus dilemma_matrix_exchange(size_t n, double s, struct DilemmaMatrix **out);

/**
 * # Safety
 * `json` must be nul-terminated; `out` must be writable.
 */
enum DilemmaStatus dilemma_matrix_from_json(const char *json, struct DilemmaMatrix **out);

/**
 * # Safety
 * `matrix` must be a live handle; `out` must be writable.
 */
enum DilemmaStatus dilemma_matrix_to_json(const struct DilemmaMatrix *matrix, char **out);

/**
 * Size of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `matrix` must be null or a live handle.
 */
size_t dilemma_matrix_size(const struct DilemmaMatrix *matrix);

/**
 * Share of player `from`'s reward sent to player `to` (both 0-based).
 *
 * # Safety
 * `matrix` must be a live handle; `out` must be writable.
 */
enum DilemmaStatus dilemma_matrix_get(const struct DilemmaMatrix *matrix,
                                      size_t from,
                                      size_t to,
                                      double *out);

/**
 * # Safety
 * `matrix` must be null or a handle not yet freed.
 */
void dilemma_matrix_free(struct DilemmaMatrix *matrix);

/**
 * Writes a new game with the transfers applied.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum DilemmaStatus dilemma_apply_transfers(const struct DilemmaGame *game,
                                           const struct DilemmaMatrix *matrix,
                                           struct DilemmaGame **out);

/**
 * Sets `*weakly_dominant` to whether `target` (null = all-C) is weakly
 * dominant for every player after transfers.
 *
 * # Safety
 * Handles must be live; `target` null or nul-terminated; `weakly_dominant` writable.
 */
enum DilemmaStatus dilemma_verify(const struct DilemmaGame *game,
                                  const struct DilemmaMatrix *matrix,
                                  const char *target,
                                  double tolerance,
                                  bool *weakly_dominant);

/**
 * # Safety
 * `game` must be live; `target` null (all-C) or nul-terminated; `out` writable.
 */
enum DilemmaStatus dilemma_symmetrical_level(const struct DilemmaGame *game,
                                             const char *target,
                                             struct DilemmaResult **out);

/**
 * # Safety
 * `game` must be live; `target` null (all-C) or nul-terminated; `out` writable.
 */
enum DilemmaStatus dilemma_general_level(const struct DilemmaGame *game,
                                         const char *target,
                                         bool allow_excess,
                                         bool force,
                                         struct DilemmaResult **out);

/**
 * The level, or NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double dilemma_result_level(const struct DilemmaResult *result);

/**
 * Copies the result's transfer matrix into a new handle.
 *
 * # Safety
 * `result` must be live; `out` writable.
 */
enum DilemmaStatus dilemma_result_matrix(const struct DilemmaResult *result,
                                         struct DilemmaMatrix **out);

/**
 * # Safety
 * `result` must be live; `out` writable.
 */
enum DilemmaStatus dilemma_result_to_json(const struct DilemmaResult *result, char **out);

/**
 * # Safety
 * `result` must be null or a handle not yet freed.
 */
void dilemma_result_free(struct DilemmaResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DILEMMA_H */

#ifndef SNAKELADDER_FFI_H
#define SNAKELADDER_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_ARGUMENT = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_IO = 3,
  SL_STATUS_MALFORMED_DOCUMENT = 4,
  SL_STATUS_INVALID_BOARD = 5,
  SL_STATUS_NOT_A_STATE = 6,
  SL_STATUS_UNREACHABLE = 7,
  SL_STATUS_SIMULATION_FAILED = 8,
  SL_STATUS_OVERFLOW = 9,
  SL_STATUS_PANIC = 10,
} SlStatus;

/**
 * Opaque handle holding the chain, finish-time profile, win matrix and
 * expectations of one board.
 */
typedef struct SlAnalysis SlAnalysis;

/**
 * Opaque board handle.
 */
typedef struct SlBoard SlBoard;

/**
 * Directed cycle `i > j > k > i` and its edges.
 */
typedef struct SlTriangle {
  size_t i;
  size_t j;
  size_t k;
  double edge_ij;
  double edge_jk;
  double edge_ki;
  double c;
} SlTriangle;

/**
 * Simulated win/draw/loss of `i` against `j`. `stderr` is negative when
 * the estimator provides none.
 */
typedef struct SlEdge {
  double win;
  double loss;
  double draw;
  double edge;
  double stderr;
} SlEdge;

/**
 * Exact duel outcome as reduced fractions.
 */
typedef struct SlDuel {
  int64_t win_num;
  int64_t win_den;
  int64_t draw_num;
  int64_t draw_den;
  int64_t loss_num;
  int64_t loss_den;
} SlDuel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length in bytes of the last error message on this thread (no NUL).
 */
size_t sl_last_error_length(void);

/**
 * Copies the last error message into `buf`, truncated to `len - 1` bytes
 * and NUL-terminated. Returns the number of bytes written, without the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes of writes.
 */
size_t sl_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Loads one of the bundled boards ("paper-figure2", "mini10").
 *
 * # Safety
 * `name` must be a valid C string; `out` must be valid for a write.
 */
enum SlStatus sl_board_bundled(const char *name, struct SlBoard **out);

/**
 * Loads a board file in canonical TOML or flat-track format.
 *
 * # Safety
 * `path` must be a valid C string; `out` must be valid for a write.
 */
enum SlStatus sl_board_load(const char *path, struct SlBoard **out);

/**
 * Parses a board document held in memory.
 *
 * # Safety
 * `text` and `name` must be valid C strings; `out` must be valid for a write.
 */
enum SlStatus sl_board_parse(const char *name, const char *text, struct SlBoard **out);

/**
 * # Safety
 * `board` must be null or a handle not yet freed.
 */
void sl_board_free(struct SlBoard *board);

/**
 * Number of the finish square, or 0 for a null handle.
 *
 * # Safety
 * `board` must be null or a live handle.
 */
size_t sl_board_size(const struct SlBoard *board);

/**
 * # Safety
 * `board` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_board_resting_square(const struct SlBoard *board, size_t square, size_t *out);

/**
 * Square reached from resting square `state` with die roll `roll` (1..=6).
 *
 * # Safety
 * `board` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_board_resolve_move(const struct SlBoard *board,
                                    size_t state,
                                    int roll,
                                    size_t *out);

/**
 * Runs the exact analysis of `board` with horizon `s_max` (1000 is the
 * usual choice).
 *
 * # Safety
 * `board` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_new(const struct SlBoard *board, size_t s_max, struct SlAnalysis **out);

/**
 * # Safety
 * `analysis` must be null or a handle not yet freed.
 */
void sl_analysis_free(struct SlAnalysis *analysis);

/**
 * Number of chain states, or 0 for a null handle.
 *
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t sl_analysis_state_count(const struct SlAnalysis *analysis);

/**
 * Copies up to `len` state square numbers (ascending) into `buf` and
 * stores the number copied in `written`.
 *
 * # Safety
 * `buf` must be valid for `len` writes; `written` valid for a write.
 */
enum SlStatus sl_analysis_states(const struct SlAnalysis *analysis,
                                 size_t *buf,
                                 size_t len,
                                 size_t *written);

/**
 * Expected moves to finish from `square`: truncated sum and direct solve.
 *
 * # Safety
 * `analysis` must be a live handle; out-pointers valid for writes.
 */
enum SlStatus sl_analysis_expected_moves(const struct SlAnalysis *analysis,
                                         size_t square,
                                         double *truncated,
                                         double *exact);

/**
 * `f` = P(finish at exactly step `s`), `g` = P(finished within `s` steps).
 *
 * # Safety
 * `analysis` must be a live handle; out-pointers valid for writes.
 */
enum SlStatus sl_analysis_finish_probability(const struct SlAnalysis *analysis,
                                             size_t square,
                                             size_t s,
                                             double *f,
                                             double *g);

/**
 * Probability of not having finished within the horizon.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_tail(const struct SlAnalysis *analysis, size_t square, double *out);

/**
 * Probability that a player on `square` returns to it before finishing.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_return_probability(const struct SlAnalysis *analysis,
                                             size_t square,
                                             double *out);

/**
 * Probability that `i` finishes in a strictly earlier round than `j`.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_q(const struct SlAnalysis *analysis, size_t i, size_t j, double *out);

/**
 * Winning edge `Q[i][j] - Q[j][i]`.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_x(const struct SlAnalysis *analysis, size_t i, size_t j, double *out);

/**
 * Probability that `i` and `j` finish in the same round.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_draw(const struct SlAnalysis *analysis, size_t i, size_t j, double *out);

/**
 * Triangle maximising its smallest edge. `c <= 0` means none is intransitive.
 *
 * # Safety
 * `analysis` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_analysis_best_triangle(const struct SlAnalysis *analysis, struct SlTriangle *out);

/**
 * `games` independent head-to-head races between squares `i` and `j`.
 *
 * # Safety
 * `board` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_simulate_paired(const struct SlBoard *board,
                                 size_t i,
                                 size_t j,
                                 uint64_t games,
                                 uint64_t seed,
                                 struct SlEdge *out);

/**
 * `games` independent games from each of `i` and `j`, every duration of
 * one compared with every duration of the other.
 *
 * # Safety
 * `board` must be a live handle; `out` valid for a write.
 */
enum SlStatus sl_simulate_per_start(const struct SlBoard *board,
                                    size_t i,
                                    size_t j,
                                    uint64_t games,
                                    uint64_t seed,
                                    struct SlEdge *out);

/**
 * Exact duel of die A against die B. Each die is `len` face values with
 * probabilities `nums[t] / dens[t]`; pass null `nums` and `dens` for a
 * fair die. A nonzero `lower_wins` makes the lower value win.
 *
 * # Safety
 * Each non-null array must be valid for its `len` reads; `out` valid for
 * a write.
 */
enum SlStatus sl_dice_duel(const int64_t *values_a,
                           const int64_t *nums_a,
                           const int64_t *dens_a,
                           size_t len_a,
                           const int64_t *values_b,
                           const int64_t *nums_b,
                           const int64_t *dens_b,
                           size_t len_b,
                           int lower_wins,
                           struct SlDuel *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNAKELADDER_FFI_H */

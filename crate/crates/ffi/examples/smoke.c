/* Build: cc smoke.c -I../include ../../../target/release/libsnakeladder_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "snakeladder.h"

int main(void) {
    SlBoard *board = NULL;
    SlAnalysis *analysis = NULL;
    if (sl_board_bundled("paper-figure2", &board) != SL_STATUS_OK) {
        char msg[256];
        sl_last_error_message(msg, sizeof msg);
        fprintf(stderr, "error: %s\n", msg);
        return 1;
    }
    if (sl_analysis_new(board, 1000, &analysis) != SL_STATUS_OK) {
        sl_board_free(board);
        return 1;
    }
    double truncated, exact, x;
    SlTriangle t;
    sl_analysis_expected_moves(analysis, 0, &truncated, &exact);
    sl_analysis_x(analysis, 69, 79, &x);
    sl_analysis_best_triangle(analysis, &t);
    printf("states %zu\n", sl_analysis_state_count(analysis));
    printf("E[0] %.6f\n", exact);
    printf("X[69][79] %.6f\n", x);
    printf("best (%zu, %zu, %zu) c=%.6f\n", t.i, t.j, t.k, t.c);
    sl_analysis_free(analysis);
    sl_board_free(board);
    return 0;
}

#include <math.h>
#include <stdio.h>
#include "dilemma.h"

int main(void) {
    DilemmaGame *game = NULL;
    DilemmaResult *result = NULL;
    if (dilemma_game_example("cyclical-3pd", 1e-6, &game) != DILEMMA_STATUS_OK) return 10;
    if (dilemma_general_level(game, NULL, false, false, &result) != DILEMMA_STATUS_OK) {
        fprintf(stderr, "%s\n", dilemma_last_error());
        return 11;
    }
    double level = dilemma_result_level(result);
    dilemma_result_free(result);
    dilemma_game_free(game);
    if (fabs(level - 0.75) > 1e-9) return 12;
    if (dilemma_game_from_json("{", &game) != DILEMMA_STATUS_INVALID_INPUT) return 13;
    printf("level %.6f\n", level);
    return 0;
}

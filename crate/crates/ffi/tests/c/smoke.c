#include <stdio.h>
#include <string.h>
#include "minorlab.h"

int main(void) {
    MlGraph *g = NULL;
    if (ml_gen(ML_GEN_MODEL_GNP, 300, 8, 3, 5, &g) != ML_STATUS_OK) {
        fprintf(stderr, "gen: %s\n", ml_last_error());
        return 1;
    }
    char *report = NULL;
    if (ml_find_minor(g, 4, "1", NULL, 5, &report) != ML_STATUS_OK) {
        fprintf(stderr, "find: %s\n", ml_last_error());
        return 1;
    }
    int ok = strstr(report, "\"branch_sets\"") != NULL;
    ml_string_free(report);

    size_t h = 0;
    if (ml_hadwiger_number(g, &h) != ML_STATUS_LIMIT_EXCEEDED) {
        return 1;
    }
    ml_graph_free(g);
    printf("ok %d\n", ok);
    return ok ? 0 : 1;
}

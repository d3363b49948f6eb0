#include <stdio.h>
#include <string.h>
#include "quantum_affine.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    const int64_t entries[18] = {0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0};
    QaBicharacter *b = NULL;
    CHECK(qa_bicharacter_new(3, 2, entries, &b) == QA_OK);

    size_t ranks[8], written = 0;
    uint64_t masks[8];
    CHECK(qa_stratum_ranks(b, ranks, masks, 4, &written) == QA_BUFFER_TOO_SMALL);
    CHECK(written == 8);
    CHECK(qa_stratum_ranks(b, ranks, masks, 8, &written) == QA_OK);
    const size_t expected[8] = {0, 2, 0, 0, 1, 1, 1, 0};
    for (int i = 0; i < 8; i++) CHECK(ranks[i] == expected[i]);

    const int64_t s[3] = {1, 1, 0}, t[3] = {0, 2, 1};
    CHECK(qa_verify_limit(b, s, t, 3) == QA_OK);

    char *dot = NULL;
    CHECK(qa_hasse_dot(b, true, &dot) == QA_OK);
    CHECK(strncmp(dot, "digraph", 7) == 0);
    qa_string_free(dot);

    const int64_t bad[4] = {1, 0, 0, 0};
    QaBicharacter *c = NULL;
    CHECK(qa_bicharacter_new(2, 1, bad, &c) == QA_INVALID_INPUT);
    CHECK(qa_last_error_message() != NULL);

    qa_bicharacter_free(b);
    printf("ok %s\n", qa_version());
    return 0;
}

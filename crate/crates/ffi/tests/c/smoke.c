#include <stdio.h>
#include <string.h>
#include "cubeset.h"

#define CHECK(call)                                                  \
    do {                                                             \
        CubesetStatus s_ = (call);                                   \
        if (s_ != CUBESET_STATUS_OK) {                               \
            char msg_[256];                                          \
            cubeset_last_error(msg_, sizeof msg_);                   \
            fprintf(stderr, "%s: %d %s\n", #call, (int)s_, msg_);    \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    CubesetSquareSet *t = NULL;
    CHECK(cubeset_trivial_set(4, &t));
    CubesetHomology *h = NULL;
    CHECK(cubeset_homology(t, CUBESET_RING_Z, &h));
    for (size_t n = 0; n < 4; n++) {
        size_t rank = 0;
        CHECK(cubeset_homology_rank(h, n, &rank));
        if (rank != 1) {
            fprintf(stderr, "H_%zu has rank %zu\n", n, rank);
            return 1;
        }
    }
    cubeset_homology_free(h);

    CubesetSquareSet *j = NULL;
    CHECK(cubeset_cube_set(3, &t));
    CHECK(cubeset_james_complex(t, 1, &j));
    size_t top = 0;
    CHECK(cubeset_square_set_cell_count(j, 2, &top));
    cubeset_square_set_free(j);
    cubeset_square_set_free(t);

    CubesetSquareSet *bad = NULL;
    if (cubeset_rack_space("{\"op\": [[0, 0], [0, 1]]}", 2, 1000, &bad) != CUBESET_STATUS_INVALID_RACK) {
        return 1;
    }
    char msg[256];
    cubeset_last_error(msg, sizeof msg);

    int64_t phi = 0;
    CHECK(cubeset_phi(2, 2, &phi));
    printf("top=%zu phi=%lld err=%s\n", top, (long long)phi, strlen(msg) > 0 ? "set" : "empty");
    return 0;
}

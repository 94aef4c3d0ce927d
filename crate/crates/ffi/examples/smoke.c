#include <stdio.h>
#include <stdlib.h>

#include "weinorman.h"

#define CHECK(call)                                                   \
    do {                                                              \
        WnStatus s_ = (call);                                         \
        if (s_ != WN_STATUS_OK) {                                     \
            fprintf(stderr, "%s: %d %s\n", #call, s_, wn_last_error()); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    WnAlgebra *alg = NULL;
    WnHierarchy *h = NULL;
    WnTrajectory *tr = NULL;
    double err = 0.0;

    CHECK(wn_algebra_new("B2", &alg));
    CHECK(wn_hierarchy_new(alg, WN_MODE_COMINUSCULE, &h));
    CHECK(wn_solve_random(h, 42, 1e-3, 1.0, &tr));
    if (wn_trajectory_status(tr, NULL, NULL) != 0) {
        fprintf(stderr, "unexpected breakdown\n");
        return 1;
    }
    CHECK(wn_trajectory_verify(tr, &err));
    printf("B2 factors=%zu points=%zu sup_error=%.3e\n", wn_hierarchy_factor_count(h), wn_trajectory_len(tr), err);

    if (wn_algebra_new("Q7", &alg) != WN_STATUS_INVALID_TYPE) {
        return 1;
    }

    wn_trajectory_free(tr);
    wn_hierarchy_free(h);
    wn_algebra_free(alg);
    return err < 1e-6 ? 0 : 1;
}

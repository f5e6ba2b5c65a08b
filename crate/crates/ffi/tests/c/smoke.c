#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "qmix.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "failed at line %d: %s (%s)\n",      \
                    __LINE__, #cond, qmix_last_error_message()); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    QmixGroup *g = NULL;
    CHECK(qmix_group_new("alt:5", &g) == QMIX_STATUS_OK);
    CHECK(qmix_group_order(g) == 60);

    QmixCharTable *t = NULL;
    CHECK(qmix_chartab_new(g, 1, &t) == QMIX_STATUS_OK);
    size_t degrees[8], k = 0;
    CHECK(qmix_chartab_degrees(t, degrees, 8, &k) == QMIX_STATUS_OK);
    CHECK(k == 5 && degrees[0] == 1 && degrees[4] == 5);
    CHECK(qmix_chartab_quasirandom_degree(t) == 3);

    double *f = calloc(2 * 60, sizeof(double));
    for (size_t i = 0; i < 60; i++) f[2 * i] = 1.0;
    QmixMixingReport r;
    CHECK(qmix_theta_defect(g, t, f, f, f, &r) == QMIX_STATUS_OK);
    CHECK(r.theta < 1e-12 && r.quasirandom_degree == 3);

    QmixGroup *bad = NULL;
    CHECK(qmix_group_new("cyclic:1", &bad) == QMIX_STATUS_INVALID_SPEC);
    CHECK(bad == NULL);

    free(f);
    qmix_chartab_free(t);
    qmix_group_free(g);
    printf("ok\n");
    return 0;
}

#include <math.h>
#include <stdio.h>

#include "ebos.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, \
                    ebos_last_error_message());                  \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    /* B = I3, C = I2: the optimal X is A itself. */
    const double a[6] = {1, 2, 3, 4, 5, 6};
    const double eye3[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    const double eye2[4] = {1, 0, 0, 1};
    EbosMatrix *ma = NULL, *mb = NULL, *mc = NULL, *x = NULL;
    CHECK(ebos_matrix_new(3, 2, a, &ma) == EBOS_STATUS_OK);
    CHECK(ebos_matrix_new(3, 3, eye3, &mb) == EBOS_STATUS_OK);
    CHECK(ebos_matrix_new(2, 2, eye2, &mc) == EBOS_STATUS_OK);

    const size_t g[2] = {1, 2};
    const size_t h[2] = {1, 1};
    double residual = -1;
    CHECK(ebos_solve(ma, mb, mc, g, 2, h, 2, EBOS_METHOD_EBOS, -1.0, &x, &residual) == EBOS_STATUS_OK);
    CHECK(ebos_matrix_rows(x) == 3 && ebos_matrix_cols(x) == 2);
    double out[6];
    CHECK(ebos_matrix_copy_data(x, out, 6) == EBOS_STATUS_OK);
    for (int i = 0; i < 6; i++) CHECK(fabs(out[i] - a[i]) < 1e-12);
    CHECK(residual < 1e-12);

    const size_t bad[1] = {2};
    EbosMatrix *none = NULL;
    CHECK(ebos_solve(ma, mb, mc, bad, 1, h, 2, EBOS_METHOD_EBOS, -1.0, &none, NULL) == EBOS_STATUS_DIMENSION_MISMATCH);
    CHECK(none == NULL);

    EbosFlops f;
    CHECK(ebos_flops(100, 100, 100, 2, &f) == EBOS_STATUS_OK);
    CHECK(f.ratio > 0 && f.n_total == f.n1 + f.n2 + f.n3);

    ebos_matrix_free(ma);
    ebos_matrix_free(mb);
    ebos_matrix_free(mc);
    ebos_matrix_free(x);
    printf("ok\n");
    return 0;
}

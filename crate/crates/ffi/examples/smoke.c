#include <stdio.h>
#include <stdlib.h>
#include "gmd_extremes.h"

int main(void) {
    GmdxDist *dist = NULL;
    if (gmdx_dist_new(1.0, 1.0, &dist) != GMDX_OK) return 1;

    double pdf1 = 0.0;
    if (gmdx_dist_pdf(dist, 1.0, &pdf1) != GMDX_OK) return 2;
    if (pdf1 < 0.2419707 || pdf1 > 0.2419708) return 3;

    GmdxNorming *nm = NULL;
    if (gmdx_norming_new(dist, 500.0, &nm) != GMDX_OK) return 4;

    double joint = 0.0;
    if (gmdx_exact_joint_cdf(nm, 2.0, 6.0, &joint) != GMDX_OK) return 5;
    double s3 = 0.0;
    if (gmdx_approx_joint_cdf(nm, 2.0, 6.0, 3, &s3) != GMDX_OK) return 6;
    if (joint <= 0.0 || joint >= 1.0) return 7;

    double c1 = 0.0, c2 = 0.0;
    if (gmdx_joint_coeffs(dist, 0.0, 0.0, NULL, NULL, &c1, &c2) != GMDX_OK) return 8;
    if (c1 != -2.0 || c2 != 5.0) return 9;

    double bad = 0.0;
    if (gmdx_dist_quantile(dist, 2.0, &bad) != GMDX_DOMAIN_ERROR) return 10;
    if (gmdx_dist_pdf(NULL, 1.0, &bad) != GMDX_NULL_POINTER) return 11;

    printf("pdf(1)=%.12f joint(2,6)=%.12f s3=%.12f version=%s\n",
           pdf1, joint, s3, gmdx_version());
    gmdx_norming_free(nm);
    gmdx_dist_free(dist);
    return 0;
}

#include <stdio.h>
#include <math.h>
#include "dressed.h"

int main(void) {
    DressedModel *m = NULL;
    if (dressed_model_new(0.5, 1.0, 0.01, &m) != DRESSED_STATUS_OK) return 10;
    DressedMoments mo;
    if (dressed_model_moments(m, &mo) != DRESSED_STATUS_OK) return 11;
    if (!(mo.uncertainty_product > 1.0 && mo.atom_energy > 0.5)) return 12;
    double n = -1.0;
    if (dressed_model_photon_density(m, 1.0, &n) != DRESSED_STATUS_OK || !(n > 0.0)) return 13;
    dressed_model_free(m);

    DressedModel *bad = NULL;
    if (dressed_model_new(0.01, 1.0, 0.01, &bad) != DRESSED_STATUS_PHYSICS || bad != NULL) return 14;
    char msg[256];
    if (dressed_last_error(msg, sizeof msg) == 0) return 15;
    printf("%s|%.17g|%.17g\n", dressed_version(), mo.mean_excitation, n);
    return 0;
}

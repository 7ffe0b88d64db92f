/* SPDX-License-Identifier: Apache-2.0 */
/* Plain C consumer of the public header. */
#include "mofsemt/mofsemt.h"

#include <stdio.h>

int main(void)
{
    mofs_config* config = NULL;
    mofs_dataset* data = NULL;
    mofs_report* report = NULL;
    double mean_acc = 0.0;
    int rc = 1;

    if (mofs_config_create(&config) != MOFS_OK) {
        return 1;
    }
    mofs_config_set(config, "outer-folds", "2");
    mofs_config_set(config, "inner-folds", "2");
    mofs_config_set(config, "iters", "2");
    if (mofs_dataset_synthetic(30, 12, 3, 2, 2.0, 1, &data) == MOFS_OK
        && mofs_run(config, data, &report) == MOFS_OK
        && mofs_report_summary(report, &mean_acc, NULL, NULL) == MOFS_OK) {
        printf("mean_acc=%.3f\n", mean_acc);
        rc = 0;
    } else {
        fprintf(stderr, "%s\n", mofs_last_error());
    }
    mofs_report_destroy(report);
    mofs_dataset_destroy(data);
    mofs_config_destroy(config);
    return rc;
}

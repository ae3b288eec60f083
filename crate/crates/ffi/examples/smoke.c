#include <stdio.h>
#include "hypercert.h"

int main(void) {
    HcSeries *s = NULL;
    char *value = NULL;
    if (hc_series_new("3,5/2,-1,2", "3/2,5,2", "-1", &s) != HC_STATUS_OK) return 1;
    if (hc_series_eval_exact(s, &value) != HC_STATUS_OK) return 1;
    printf("4F3 = %s\n", value);
    hc_string_free(value);
    if (hc_whipple_rhs_exact(s, &value) != HC_STATUS_OK) return 1;
    printf("whipple = %s\n", value);
    hc_string_free(value);
    hc_series_free(s);

    HcReport *r = NULL;
    if (hc_verify(5, 1, &r) != HC_STATUS_OK) return 1;
    printf("verify(5,1) all_equal_one = %d\n", hc_report_all_equal_one(r));
    hc_report_free(r);

    if (hc_verify(1, 3, &r) != HC_STATUS_PRECONDITION) return 1;
    printf("error: %s\n", hc_last_error_message());
    return 0;
}

/* The public header must compile as C; exercises a few calls end to end. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "tvd/tvd.h"

int main(void) {
  const char* p_probs[] = {"1/2", "1/2"};
  const char* q_probs[] = {"2/5", "3/5"};
  tvd_distribution* p = NULL;
  tvd_distribution* q = NULL;
  double value = 0;
  char* exact = NULL;
  int ok = 1;

  if (tvd_distribution_create(NULL, p_probs, 2, TVD_BACKEND_RATIONAL, &p) != TVD_OK) return 1;
  if (tvd_distribution_create(NULL, q_probs, 2, TVD_BACKEND_RATIONAL, &q) != TVD_OK) return 1;
  if (tvd_product_distance(p, q, 2, TVD_ENGINE_TYPE_CLASS, NULL, &value, &exact, NULL) != TVD_OK) return 1;
  ok = ok && strcmp(exact, "11/100") == 0 && fabs(value - 0.11) < 1e-15;
  tvd_string_free(exact);

  if (tvd_lemma1_first_bound(0.1, 0.0, 3, &value) != TVD_ERR_PBAR_NOT_POSITIVE) ok = 0;
  if (strlen(tvd_last_error()) == 0) ok = 0;

  tvd_distribution_free(p);
  tvd_distribution_free(q);
  printf("%s\n", ok ? "ok" : "mismatch");
  return ok ? 0 : 1;
}

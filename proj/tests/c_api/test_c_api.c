/* Exercises the C boundary from plain C: forward value, backward against
 * central differences of the forward pass, and error reporting. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "scloss/c_api.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: FAILED: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static unsigned long long lcg_state;

static double lcg_uniform(void) {
  lcg_state = lcg_state * 6364136223846793005ULL + 1442695040888963407ULL;
  return (double)(lcg_state >> 11) * (1.0 / 9007199254740992.0);
}

static double total_at(const scloss_config* cfg, int h, int w, const double* pred, const int* labels) {
  double t = NAN;
  if (scloss_forward(cfg, h, w, pred, labels, &t, NULL, NULL) != SCLOSS_OK) return NAN;
  return t;
}

static void test_closed_form(void) {
  scloss_config cfg;
  double pred[64], loss_map[64], attention[64], total = 0.0;
  int labels[64], i;
  scloss_default_config(&cfg);
  EXPECT(cfg.k_max == 2 && cfg.alpha == 1.0 && cfg.epsilon == 1e-7 && cfg.level_weights == NULL);
  for (i = 0; i < 64; ++i) {
    pred[i] = 0.5;
    labels[i] = 1;
  }
  EXPECT(scloss_forward(&cfg, 8, 8, pred, labels, &total, loss_map, attention) == SCLOSS_OK);
  EXPECT(fabs(total - 0.4802196) < 1e-6);
  for (i = 0; i < 64; ++i) {
    EXPECT(fabs(loss_map[i] - total) < 1e-12);
    EXPECT(fabs(attention[i] - 0.6928101) < 1e-6);
  }
}

static void test_backward(void) {
  const int h = 6, w = 5, n = 30;
  const double weights[3] = {1.0, 0.25, 0.5};
  double pred[30], grad[30], worst = 0.0;
  int labels[30], i, combo;
  lcg_state = 17;
  for (combo = 0; combo < 9; ++combo) {
    scloss_config cfg;
    scloss_default_config(&cfg);
    cfg.single_response = combo / 3;
    cfg.regularizer = combo % 3;
    if (combo == 4) {
      cfg.k_max = 3;
      cfg.level_weights = weights;
    }
    for (i = 0; i < n; ++i) {
      pred[i] = 0.05 + 0.9 * lcg_uniform();
      labels[i] = lcg_uniform() < 0.5;
    }
    EXPECT(scloss_backward(&cfg, h, w, pred, labels, grad) == SCLOSS_OK);
    for (i = 0; i < n; ++i) {
      const double s = 1e-4, p0 = pred[i];
      double fp1, fm1, fp2, fm2, fd, denom;
      pred[i] = p0 + s; fp1 = total_at(&cfg, h, w, pred, labels);
      pred[i] = p0 - s; fm1 = total_at(&cfg, h, w, pred, labels);
      pred[i] = p0 + 2 * s; fp2 = total_at(&cfg, h, w, pred, labels);
      pred[i] = p0 - 2 * s; fm2 = total_at(&cfg, h, w, pred, labels);
      pred[i] = p0;
      fd = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * s);
      denom = fmax(fmax(fabs(fd), fabs(grad[i])), 1e-8);
      if (fabs(fd - grad[i]) / denom > worst) worst = fabs(fd - grad[i]) / denom;
    }
  }
  EXPECT(worst < 1e-4);
}

static void test_errors(void) {
  scloss_config cfg;
  double pred[4] = {0.5, 0.5, 0.5, 0.5}, total = 0.0, grad[4];
  int labels[4] = {1, 1, 1, 1};
  int bad_labels[4] = {1, 2, 1, 1};
  double bad_pred[4] = {0.5, 1.5, 0.5, 0.5};
  scloss_default_config(&cfg);

  EXPECT(scloss_forward(&cfg, 1, 1, pred, labels, &total, NULL, NULL) == SCLOSS_E_INPUT);
  EXPECT(strlen(scloss_last_error()) > 0);
  EXPECT(scloss_forward(&cfg, 2, 2, pred, bad_labels, &total, NULL, NULL) == SCLOSS_E_INPUT);
  EXPECT(scloss_forward(&cfg, 2, 2, bad_pred, labels, &total, NULL, NULL) == SCLOSS_E_INPUT);
  EXPECT(scloss_forward(&cfg, 2, 2, NULL, labels, &total, NULL, NULL) == SCLOSS_E_INPUT);
  EXPECT(scloss_forward(NULL, 2, 2, pred, labels, &total, NULL, NULL) == SCLOSS_E_CONFIG);
  EXPECT(scloss_backward(&cfg, 0, 2, pred, labels, grad) == SCLOSS_E_INPUT);

  cfg.alpha = 0.0;
  EXPECT(scloss_forward(&cfg, 2, 2, pred, labels, &total, NULL, NULL) == SCLOSS_E_CONFIG);
  EXPECT(strstr(scloss_last_error(), "alpha") != NULL);
  scloss_default_config(&cfg);
  cfg.regularizer = 9;
  EXPECT(scloss_forward(&cfg, 2, 2, pred, labels, &total, NULL, NULL) == SCLOSS_E_CONFIG);

  scloss_default_config(&cfg);
  cfg.k_max = 1;
  EXPECT(scloss_forward(&cfg, 2, 2, pred, labels, &total, NULL, NULL) == SCLOSS_OK);
}

int main(void) {
  const char* variant = scloss_kernel_variant();
  EXPECT(scloss_abi_version() == SCLOSS_C_ABI_VERSION);
  EXPECT(variant != NULL && (strcmp(variant, "scalar") == 0 || strcmp(variant, "avx2") == 0));
  test_closed_form();
  test_backward();
  test_errors();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("c_api: all checks passed (kernel variant %s)\n", variant);
  return 0;
}

#ifndef SCLOSS_C_API_H
#define SCLOSS_C_API_H

/* Plain-C entry points over caller-owned row-major buffers. Every function
 * returns one of the status codes below; on failure scloss_last_error()
 * describes the problem (thread-local, valid until the next call). */

#ifdef __cplusplus
extern "C" {
#endif

#define SCLOSS_C_ABI_VERSION 1

enum {
  SCLOSS_OK = 0,
  SCLOSS_E_INPUT = 2,  /* bad arguments, size mismatch, degenerate geometry */
  SCLOSS_E_CONFIG = 3, /* invalid configuration */
  SCLOSS_E_INTERNAL = 5
};

/* Enum fields use the same integer codes as the C++ enums:
 * single_response: 0 bce, 1 mse, 2 l1, 3 cross_entropy
 * regularizer:     0 gaussian, 1 distance, 2 constant
 * reduction:       0 mean, 1 sum */
typedef struct scloss_config {
  int k_max;
  double alpha;
  int single_response;
  int regularizer;
  double epsilon;
  int reduction;
  const double* level_weights; /* k_max entries, or NULL for (1/2)^(k-1) */
  double addon_weight;
} scloss_config;

int scloss_abi_version(void);
const char* scloss_last_error(void);

/* Name of the kernel variant in use ("scalar", "avx2"). */
const char* scloss_kernel_variant(void);

void scloss_default_config(scloss_config* cfg);

/* pred: height*width probabilities in [0,1]; labels: height*width values in {0,1}.
 * loss_map and attention_map may be NULL. */
int scloss_forward(const scloss_config* cfg, int height, int width, const double* pred, const int* labels,
                   double* total, double* loss_map, double* attention_map);

/* d total / d pred; zero where pred lies outside [epsilon, 1 - epsilon]. */
int scloss_backward(const scloss_config* cfg, int height, int width, const double* pred, const int* labels,
                    double* grad);

#ifdef __cplusplus
}
#endif

#endif

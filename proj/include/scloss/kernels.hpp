#pragma once

// Data-parallel inner loops of the loss, with a portable scalar reference
// implementation and vector variants selected at runtime.
//
// Every variant evaluates the same operation sequence (no fused multiply-add,
// identical polynomial log/exp), so results are bitwise identical across
// variants. The SCLOSS_ISA environment variable ("scalar" or "avx2") overrides
// the automatic choice.

#include <cstddef>

#include "scloss/kinds.hpp"

namespace scloss::kernels {

enum class Isa : int { scalar = 0, avx2 = 1 };

struct PairParams {
  double alpha = 1.0;
  Regularizer regularizer = Regularizer::gaussian;
  PairRule rule = PairRule::product;
};

// Per-pair inputs for the gradient kernel. a = c * S and b = c * dS/dp are the
// per-center single-response value and derivative pre-scaled by the center's
// level weight, 1/N and reduction factor.
struct PairGradientArgs {
  const double* p_i;
  const double* p_j;
  const double* code_i;
  const double* code_j;
  const double* a_i;
  const double* a_j;
  const double* b_i;
  const double* b_j;
  double* g_i;  // d(a_i/D + a_j/D)/dp_i, written
  double* g_j;  // d(a_i/D + a_j/D)/dp_j, written
  std::size_t n;
};

struct KernelTable {
  Isa isa;
  const char* name;
  std::size_t lanes;

  void (*log)(const double* x, std::size_t n, double* out);
  void (*exp)(const double* x, std::size_t n, double* out);

  // value[i] = S(p[i], label[i]); deriv[i] = dS/dp (deriv may be null).
  // cross_entropy is evaluated as bce on the supplied (true-class) probability.
  void (*single_response)(const double* p, const double* label, std::size_t n, SingleResponse kind, double* value,
                          double* deriv);

  // out[i] = 1 / (mutual(p_i, p_j, m) + alpha * f(p_i, p_j)).
  void (*pair_inv_denominator)(const double* p_i, const double* p_j, const double* code_i, const double* code_j,
                               std::size_t n, const PairParams& params, double* out);

  void (*pair_gradient)(const PairGradientArgs& args, const PairParams& params);
};

const char* to_string(Isa isa);

// Table for the given variant, or nullptr when the build or CPU lacks it.
const KernelTable* table_for(Isa isa);
bool supported(Isa isa);
Isa best_available();

// Currently selected table (resolved on first use).
const KernelTable& active();

// Throws Error(invalid_argument) if the variant is unavailable.
void select(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace scloss::kernels

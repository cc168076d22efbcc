#include "scloss/c_api.h"

#include <algorithm>
#include <exception>
#include <string>
#include <vector>

#include "scloss/error.hpp"
#include "scloss/grad.hpp"
#include "scloss/kernels.hpp"
#include "scloss/loss.hpp"

namespace {

thread_local std::string g_last_error;

scloss::SCLossConfig convert(const scloss_config* c) {
  using namespace scloss;
  if (!c) fail(ErrorKind::config, "config pointer is NULL");
  if (c->single_response < 0 || c->single_response > 3) fail(ErrorKind::config, "single_response code out of range");
  if (c->regularizer < 0 || c->regularizer > 2) fail(ErrorKind::config, "regularizer code out of range");
  if (c->reduction < 0 || c->reduction > 1) fail(ErrorKind::config, "reduction code out of range");
  if (c->k_max < 1 || c->k_max > 64) fail(ErrorKind::config, "k_max must lie in 1..64");
  SCLossConfig cfg;
  cfg.with_levels(c->k_max);
  if (c->level_weights) cfg.level_weights.assign(c->level_weights, c->level_weights + c->k_max);
  cfg.alpha = c->alpha;
  cfg.single_response = static_cast<SingleResponse>(c->single_response);
  cfg.regularizer = static_cast<Regularizer>(c->regularizer);
  cfg.epsilon = c->epsilon;
  cfg.reduction = static_cast<Reduction>(c->reduction);
  cfg.addon_weight = c->addon_weight;
  cfg.validate();
  return cfg;
}

scloss::GridDims dims_of(int h, int w) {
  if (h < 1 || w < 1) scloss::fail(scloss::ErrorKind::invalid_argument, "height and width must be >= 1");
  return {h, w};
}

template <class F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SCLOSS_OK;
  } catch (const scloss::Error& e) {
    g_last_error = e.what();
    return e.kind() == scloss::ErrorKind::config ? SCLOSS_E_CONFIG : SCLOSS_E_INPUT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCLOSS_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SCLOSS_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) scloss::fail(scloss::ErrorKind::invalid_argument, std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

int scloss_abi_version(void) { return SCLOSS_C_ABI_VERSION; }

const char* scloss_last_error(void) { return g_last_error.c_str(); }

const char* scloss_kernel_variant(void) { return scloss::kernels::active().name; }

void scloss_default_config(scloss_config* cfg) {
  if (!cfg) return;
  const scloss::SCLossConfig d;
  cfg->k_max = d.k_max;
  cfg->alpha = d.alpha;
  cfg->single_response = static_cast<int>(d.single_response);
  cfg->regularizer = static_cast<int>(d.regularizer);
  cfg->epsilon = d.epsilon;
  cfg->reduction = static_cast<int>(d.reduction);
  cfg->level_weights = nullptr;
  cfg->addon_weight = d.addon_weight;
}

int scloss_forward(const scloss_config* cfg, int height, int width, const double* pred, const int* labels,
                   double* total, double* loss_map, double* attention_map) {
  return guarded([&] {
    const scloss::SCLossConfig c = convert(cfg);
    const scloss::GridDims dims = dims_of(height, width);
    require(pred, "pred");
    require(labels, "labels");
    require(total, "total");
    const scloss::ProbabilityMap p(dims, std::vector<double>(pred, pred + dims.size()));
    const scloss::LabelMap n(dims, std::vector<int>(labels, labels + dims.size()));
    const scloss::LossBreakdown lb = scloss::image_loss(p, n, c);
    *total = lb.total;
    if (loss_map) std::copy(lb.loss_map.vector().begin(), lb.loss_map.vector().end(), loss_map);
    if (attention_map) std::copy(lb.attention_map.vector().begin(), lb.attention_map.vector().end(), attention_map);
  });
}

int scloss_backward(const scloss_config* cfg, int height, int width, const double* pred, const int* labels,
                    double* grad) {
  return guarded([&] {
    const scloss::SCLossConfig c = convert(cfg);
    const scloss::GridDims dims = dims_of(height, width);
    require(pred, "pred");
    require(labels, "labels");
    require(grad, "grad");
    const scloss::ProbabilityMap p(dims, std::vector<double>(pred, pred + dims.size()));
    const scloss::LabelMap n(dims, std::vector<int>(labels, labels + dims.size()));
    const scloss::FieldMap g = scloss::grad_wrt_probs(p, n, c);
    std::copy(g.vector().begin(), g.vector().end(), grad);
  });
}

}  // extern "C"

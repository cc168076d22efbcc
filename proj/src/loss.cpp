#include "scloss/loss.hpp"

#include <cmath>
#include <string>

#include "engine.hpp"
#include "scloss/error.hpp"
#include "scloss/kernels.hpp"

namespace scloss {

namespace {

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorKind::invalid_argument, std::string(what) + " must be clamped into (0,1), got " + std::to_string(p));
  }
}

void require_indicator(int n, const char* what) {
  if (n != 0 && n != 1) fail(ErrorKind::invalid_argument, std::string(what) + " must be 0 or 1, got " + std::to_string(n));
}

}  // namespace

double single_response(SingleResponse kind, double p, int n) {
  require_open_unit(p, "probability");
  require_indicator(n, "label");
  switch (kind) {
    case SingleResponse::bce:
    case SingleResponse::cross_entropy:
      return n == 1 ? -std::log(p) : -std::log(1.0 - p);
    case SingleResponse::mse: return (p - n) * (p - n);
    case SingleResponse::l1: return std::abs(p - n);
  }
  fail(ErrorKind::invalid_argument, "unknown single-response kind");
}

double mutual_response(double p_i, double p_j, int m) {
  require_indicator(m, "pair indicator");
  const double q = p_i * p_j;
  require_open_unit(q, "joint probability p_i*p_j");
  return -(m * std::log(q) + (1 - m) * std::log(1.0 - q));
}

double pairwise_regularizer(Regularizer kind, double p_i, double p_j) {
  switch (kind) {
    case Regularizer::gaussian: return std::exp(-p_i * p_j);
    case Regularizer::distance: return std::exp((p_i - p_j) * (p_i - p_j));
    case Regularizer::constant: return 1.0;
  }
  fail(ErrorKind::invalid_argument, "unknown regularizer kind");
}

double pair_denominator(double p_i, double p_j, int m, const SCLossConfig& cfg) {
  return mutual_response(p_i, p_j, m) + cfg.alpha * pairwise_regularizer(cfg.regularizer, p_i, p_j);
}

double pixel_level_loss(PixelPos i, int k, const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  cfg.validate();
  require_same_dims(pred.dims(), labels.dims(), "prediction/label");
  if (k < 1 || k > cfg.k_max) fail(ErrorKind::invalid_argument, "level " + std::to_string(k) + " outside 1..k_max");
  const auto ring = ring_neighbors(i, k, pred.dims());
  if (ring.empty()) {
    fail(ErrorKind::degenerate_geometry, "pixel has no level-" + std::to_string(k) + " neighbors in " + pred.dims().to_string());
  }
  const double p_i = clamp_probability(pred.at(i), cfg.epsilon);
  const int n_i = labels.at(i);
  const double s = single_response(cfg.single_response, p_i, n_i);
  double sum = 0.0;
  for (const PixelPos j : ring) {
    const double p_j = clamp_probability(pred.at(j), cfg.epsilon);
    const int n_j = labels.at(j);
    require_indicator(n_j, "label");
    sum += s / pair_denominator(p_i, p_j, n_i * n_j, cfg);
  }
  return sum / static_cast<double>(ring.size());
}

double pixel_loss(PixelPos i, const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  cfg.validate();
  double total = 0.0;
  for (int k = 1; k <= cfg.k_max; ++k) {
    const double w = cfg.level_weights[static_cast<std::size_t>(k - 1)];
    total += w * pixel_level_loss(i, k, pred, labels, cfg);
  }
  return total;
}

LossBreakdown image_loss(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  return detail::forward(detail::prepare_binary(pred, labels, cfg), cfg);
}

FieldMap attention_map(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  return image_loss(pred, labels, cfg).attention_map;
}

FieldMap bce_loss_map(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  const detail::Prepared in = detail::prepare_binary(pred, labels, cfg);
  std::vector<double> out(in.p.size());
  kernels::active().single_response(in.p.data(), in.single.data(), in.p.size(), in.kind, out.data(), nullptr);
  return FieldMap(in.dims, std::move(out));
}

double combine_addon(double base_loss, double sc_total, const SCLossConfig& cfg) {
  return base_loss + cfg.addon_weight * sc_total;
}

LossBreakdown multiclass_image_loss(const ClassProbabilityMap& probs, const LabelMap& labels, const SCLossConfig& cfg) {
  cfg.validate();
  if (cfg.single_response != SingleResponse::cross_entropy && cfg.single_response != SingleResponse::bce) {
    fail(ErrorKind::config, "multi-class loss requires the cross_entropy single response");
  }
  require_same_dims(probs.dims(), labels.dims(), "class-probability/label");
  detail::Prepared in;
  in.dims = probs.dims();
  const std::size_t n = in.dims.size();
  in.p.resize(n);
  in.codes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= probs.classes()) {
      fail(ErrorKind::invalid_argument, "label " + std::to_string(y) + " at index " + std::to_string(i) + " outside [0, " +
                                            std::to_string(probs.classes() - 1) + "]");
    }
    in.p[i] = clamp_probability(probs.prob(i, y), cfg.epsilon);
    in.codes[i] = static_cast<double>(y);
  }
  in.single.assign(n, 1.0);  // -log of the true-class probability
  in.rule = PairRule::equality;
  in.kind = SingleResponse::cross_entropy;
  return detail::forward(in, cfg);
}

}  // namespace scloss

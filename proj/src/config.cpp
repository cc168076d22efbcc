#include "scloss/config.hpp"

#include <cmath>

#include "scloss/error.hpp"

namespace scloss {

std::vector<double> SCLossConfig::default_level_weights(int k_max) {
  std::vector<double> w;
  double v = 1.0;
  for (int k = 1; k <= k_max; ++k, v *= 0.5) w.push_back(v);
  return w;
}

SCLossConfig& SCLossConfig::with_levels(int k) {
  k_max = k;
  level_weights = default_level_weights(k);
  return *this;
}

void SCLossConfig::validate() const {
  if (k_max < 1) fail(ErrorKind::config, "k_max must be >= 1, got " + std::to_string(k_max));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::config, "alpha must be positive and finite");
  if (!(epsilon > 0.0 && epsilon < 0.5)) fail(ErrorKind::config, "epsilon must lie in (0, 0.5)");
  if (level_weights.size() != static_cast<std::size_t>(k_max)) {
    fail(ErrorKind::config, "level_weights has " + std::to_string(level_weights.size()) + " entries, expected k_max = " +
                                std::to_string(k_max));
  }
  bool any_positive = false;
  for (double w : level_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::config, "level weights must be finite and non-negative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) fail(ErrorKind::config, "at least one level weight must be positive");
  if (!(addon_weight >= 0.0) || !std::isfinite(addon_weight)) fail(ErrorKind::config, "addon_weight must be finite and non-negative");
  const int sr = static_cast<int>(single_response);
  if (sr < 0 || sr > 3) fail(ErrorKind::config, "unknown single_response");
  const int rg = static_cast<int>(regularizer);
  if (rg < 0 || rg > 2) fail(ErrorKind::config, "unknown regularizer");
}

std::string_view to_string(SingleResponse v) {
  switch (v) {
    case SingleResponse::bce: return "bce";
    case SingleResponse::mse: return "mse";
    case SingleResponse::l1: return "l1";
    case SingleResponse::cross_entropy: return "cross_entropy";
  }
  return "?";
}

std::string_view to_string(Regularizer v) {
  switch (v) {
    case Regularizer::gaussian: return "gaussian";
    case Regularizer::distance: return "distance";
    case Regularizer::constant: return "constant";
  }
  return "?";
}

std::string_view to_string(Reduction v) { return v == Reduction::mean ? "mean" : "sum"; }

std::optional<SingleResponse> parse_single_response(std::string_view s) {
  if (s == "bce") return SingleResponse::bce;
  if (s == "mse") return SingleResponse::mse;
  if (s == "l1") return SingleResponse::l1;
  if (s == "cross_entropy" || s == "ce") return SingleResponse::cross_entropy;
  return std::nullopt;
}

std::optional<Regularizer> parse_regularizer(std::string_view s) {
  if (s == "gaussian") return Regularizer::gaussian;
  if (s == "distance") return Regularizer::distance;
  if (s == "constant") return Regularizer::constant;
  return std::nullopt;
}

std::optional<Reduction> parse_reduction(std::string_view s) {
  if (s == "mean") return Reduction::mean;
  if (s == "sum") return Reduction::sum;
  return std::nullopt;
}

}  // namespace scloss

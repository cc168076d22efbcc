#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scloss/kinds.hpp"

namespace scloss {

/// Hyperparameters of the spatial coherence loss.
///
/// Defaults: two adjacency levels weighted (1, 1/2), alpha = 1, BCE single
/// response, Gaussian pairwise regularizer, epsilon = 1e-7, mean reduction,
/// add-on weight 1.
struct SCLossConfig {
  int k_max = 2;
  double alpha = 1.0;
  SingleResponse single_response = SingleResponse::bce;
  Regularizer regularizer = Regularizer::gaussian;
  double epsilon = 1e-7;
  Reduction reduction = Reduction::mean;
  std::vector<double> level_weights = default_level_weights(2);
  double addon_weight = 1.0;

  /// (1/2)^(k-1) for k = 1..k_max.
  static std::vector<double> default_level_weights(int k_max);

  /// Sets k_max and resets level_weights to the default halving sequence.
  SCLossConfig& with_levels(int k);

  /// Throws Error(ErrorKind::config) describing the first violated invariant.
  void validate() const;

  bool operator==(const SCLossConfig&) const = default;
};

std::string_view to_string(SingleResponse v);
std::string_view to_string(Regularizer v);
std::string_view to_string(Reduction v);

std::optional<SingleResponse> parse_single_response(std::string_view s);
std::optional<Regularizer> parse_regularizer(std::string_view s);
std::optional<Reduction> parse_reduction(std::string_view s);

}  // namespace scloss

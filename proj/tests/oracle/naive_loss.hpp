#pragma once

// Straight-from-the-definition reference: for every pixel and level, scan the
// whole image for pixels at Chebyshev distance exactly k. Uses std::log and
// std::exp only and shares no code with the library's evaluation path.

#include <vector>

#include "scloss/config.hpp"

namespace oracle {

struct NaiveResult {
  double total = 0.0;
  std::vector<double> loss_map;
  std::vector<double> attention_map;
  std::vector<double> per_level_totals;
};

NaiveResult naive_loss(int height, int width, const std::vector<double>& pred, const std::vector<int>& labels,
                       const scloss::SCLossConfig& cfg);

/// probs is pixel-major with `classes` entries per pixel.
NaiveResult naive_multiclass_loss(int height, int width, int classes, const std::vector<double>& probs,
                                  const std::vector<int>& labels, const scloss::SCLossConfig& cfg);

}  // namespace oracle

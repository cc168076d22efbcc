#pragma once

#include <vector>

#include "scloss/config.hpp"
#include "scloss/grid.hpp"

namespace scloss {

struct LossBreakdown {
  double total = 0.0;                    // reduced loss (mean or sum per config)
  FieldMap loss_map;                     // per-pixel loss L_i
  FieldMap attention_map;                // per-pixel aggregated 1/denominator
  std::vector<double> per_level_totals;  // reduced level_weights[k] * L_i^k, one per level
};

// Scalar term kernels. Probabilities must already be clamped into (0,1).

/// Per-pixel loss of a single prediction. bce and cross_entropy are the
/// negated log-likelihood, mse is (p-n)^2, l1 is |p-n|.
double single_response(SingleResponse kind, double p, int n);

/// -[m log(p_i p_j) + (1-m) log(1 - p_i p_j)] for a pair indicator m in {0,1}.
double mutual_response(double p_i, double p_j, int m);

/// gaussian: exp(-p_i p_j); distance: exp((p_i - p_j)^2); constant: 1.
double pairwise_regularizer(Regularizer kind, double p_i, double p_j);

/// mutual_response + alpha * pairwise_regularizer.
double pair_denominator(double p_i, double p_j, int m, const SCLossConfig& cfg);

// Per-pixel evaluation straight from the definition. These clamp the
// probabilities they read with cfg.epsilon.

/// Mean over the in-bounds level-k ring of single / denominator.
double pixel_level_loss(PixelPos i, int k, const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

/// sum_k level_weights[k-1] * pixel_level_loss(i, k).
double pixel_loss(PixelPos i, const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

/// Whole-image forward pass. Throws on size mismatch, non-binary labels,
/// invalid config, or a pixel with no in-bounds neighbor at some level.
LossBreakdown image_loss(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

FieldMap attention_map(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

/// Per-pixel single-response map (the numerator alone).
FieldMap bce_loss_map(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

/// base_loss + addon_weight * sc_total.
double combine_addon(double base_loss, double sc_total, const SCLossConfig& cfg);

/// Multi-class variant: single = -log p_i[y_i]; pairs use m = [y_i == y_j] and
/// the true-class probabilities p_i[y_i], p_j[y_j]. cfg.single_response must be
/// cross_entropy or bce.
LossBreakdown multiclass_image_loss(const ClassProbabilityMap& probs, const LabelMap& labels, const SCLossConfig& cfg);

}  // namespace scloss

#pragma once

#include <vector>

#include "scloss/grid.hpp"

namespace scloss::metrics {

inline constexpr double kBetaSquared = 0.3;

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct MetricReport {
  double mae = 0.0;
  double f_adp = 0.0;
  double f_max = 0.0;
  double adaptive_threshold = 0.0;
  double f_max_threshold = 0.0;
  std::vector<PrPoint> pr_curve;  // 256 points, threshold t/255
};

/// Mean absolute error between probabilities and binary ground truth.
double mae(const ProbabilityMap& pred, const LabelMap& gt);

/// min(2 * mean(pred), 1)
double adaptive_threshold(const ProbabilityMap& pred);

/// Binarizes pred with an inclusive comparison (p >= threshold).
LabelMap binarize(const ProbabilityMap& pred, double threshold);

/// F = (1 + b2) P R / (b2 P + R); 0 when either map has no positives.
double f_measure(const LabelMap& pred_binary, const LabelMap& gt, double beta_sq = kBetaSquared);

double f_adp(const ProbabilityMap& pred, const LabelMap& gt);

struct FMax {
  double f_max = 0.0;
  double threshold = 0.0;  // lowest threshold attaining f_max
  std::vector<PrPoint> pr_curve;
};

/// Sweeps thresholds t/255 (t = 0..255) plus the adaptive threshold.
FMax f_max(const ProbabilityMap& pred, const LabelMap& gt);

MetricReport evaluate(const ProbabilityMap& pred, const LabelMap& gt);

}  // namespace scloss::metrics

#include "scloss/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "scloss/error.hpp"

namespace scloss::metrics {

namespace {

void check_pair(const ProbabilityMap& pred, const LabelMap& gt) {
  require_same_dims(pred.dims(), gt.dims(), "prediction/ground truth");
  require_binary(gt, "ground truth");
}

double f_from_counts(double tp, double fp, double fn, double beta_sq) {
  if (tp + fp == 0.0 || tp + fn == 0.0) return 0.0;
  const double precision = tp / (tp + fp);
  const double recall = tp / (tp + fn);
  const double denom = beta_sq * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + beta_sq) * precision * recall / denom;
}

// Predictions split by ground truth and sorted ascending, so the number of
// pixels with p >= t is a binary search away.
struct SortedSplit {
  std::vector<double> fg;
  std::vector<double> bg;

  SortedSplit(const ProbabilityMap& pred, const LabelMap& gt) {
    for (std::size_t i = 0; i < pred.size(); ++i) (gt[i] == 1 ? fg : bg).push_back(pred[i]);
    std::sort(fg.begin(), fg.end());
    std::sort(bg.begin(), bg.end());
  }

  static double at_or_above(const std::vector<double>& v, double t) {
    return static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), t));
  }

  PrPoint point(double t, double* f) const {
    const double tp = at_or_above(fg, t);
    const double fp = at_or_above(bg, t);
    const double fn = static_cast<double>(fg.size()) - tp;
    PrPoint pt{t, tp + fp > 0.0 ? tp / (tp + fp) : 0.0, fg.empty() ? 0.0 : tp / static_cast<double>(fg.size())};
    *f = f_from_counts(tp, fp, fn, kBetaSquared);
    return pt;
  }
};

}  // namespace

double mae(const ProbabilityMap& pred, const LabelMap& gt) {
  check_pair(pred, gt);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - gt[i]);
  return sum / static_cast<double>(pred.size());
}

double adaptive_threshold(const ProbabilityMap& pred) {
  double sum = 0.0;
  for (const double v : pred.values()) sum += v;
  return std::min(2.0 * sum / static_cast<double>(pred.size()), 1.0);
}

LabelMap binarize(const ProbabilityMap& pred, double threshold) {
  LabelMap out(pred.dims(), 0);
  for (std::size_t i = 0; i < pred.size(); ++i) out[i] = pred[i] >= threshold ? 1 : 0;
  return out;
}

double f_measure(const LabelMap& pred_binary, const LabelMap& gt, double beta_sq) {
  require_same_dims(pred_binary.dims(), gt.dims(), "prediction/ground truth");
  require_binary(pred_binary, "binary prediction");
  require_binary(gt, "ground truth");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    tp += pred_binary[i] == 1 && gt[i] == 1;
    fp += pred_binary[i] == 1 && gt[i] == 0;
    fn += pred_binary[i] == 0 && gt[i] == 1;
  }
  return f_from_counts(tp, fp, fn, beta_sq);
}

double f_adp(const ProbabilityMap& pred, const LabelMap& gt) {
  check_pair(pred, gt);
  return f_measure(binarize(pred, adaptive_threshold(pred)), gt);
}

FMax f_max(const ProbabilityMap& pred, const LabelMap& gt) {
  check_pair(pred, gt);
  const SortedSplit split(pred, gt);
  FMax out;
  out.pr_curve.reserve(256);
  bool first = true;
  auto consider = [&](double t, double f) {
    if (first || f > out.f_max || (f == out.f_max && t < out.threshold)) {
      out.f_max = f;
      out.threshold = t;
      first = false;
    }
  };
  for (int t = 0; t <= 255; ++t) {
    double f = 0.0;
    out.pr_curve.push_back(split.point(t / 255.0, &f));
    consider(t / 255.0, f);
  }
  double f_adaptive = 0.0;
  const double tau = adaptive_threshold(pred);
  split.point(tau, &f_adaptive);
  consider(tau, f_adaptive);
  return out;
}

MetricReport evaluate(const ProbabilityMap& pred, const LabelMap& gt) {
  MetricReport r;
  r.mae = mae(pred, gt);
  r.adaptive_threshold = adaptive_threshold(pred);
  r.f_adp = f_adp(pred, gt);
  FMax fm = f_max(pred, gt);
  r.f_max = fm.f_max;
  r.f_max_threshold = fm.threshold;
  r.pr_curve = std::move(fm.pr_curve);
  return r;
}

}  // namespace scloss::metrics

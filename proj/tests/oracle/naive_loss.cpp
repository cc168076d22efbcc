#include "naive_loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace oracle {

namespace {

using scloss::Reduction;
using scloss::Regularizer;
using scloss::SCLossConfig;
using scloss::SingleResponse;

double clamp(double p, double eps) { return std::min(std::max(p, eps), 1.0 - eps); }

double single(SingleResponse kind, double p, double n) {
  switch (kind) {
    case SingleResponse::bce:
    case SingleResponse::cross_entropy: return -(n * std::log(p) + (1.0 - n) * std::log(1.0 - p));
    case SingleResponse::mse: return (p - n) * (p - n);
    case SingleResponse::l1: return std::abs(p - n);
  }
  throw std::logic_error("single");
}

double regularizer(Regularizer kind, double a, double b) {
  switch (kind) {
    case Regularizer::gaussian: return std::exp(-a * b);
    case Regularizer::distance: return std::exp((a - b) * (a - b));
    case Regularizer::constant: return 1.0;
  }
  throw std::logic_error("regularizer");
}

double mutual(double a, double b, double m) {
  const double q = a * b;
  return -(m * std::log(q) + (1.0 - m) * std::log(1.0 - q));
}

// s[i]: single response; p[i]: probability used in pairs; same(i, j): pair indicator.
template <class Same>
NaiveResult evaluate(int h, int w, const std::vector<double>& s, const std::vector<double>& p, Same same,
                     const SCLossConfig& cfg) {
  const int n = h * w;
  NaiveResult r;
  r.loss_map.assign(n, 0.0);
  r.attention_map.assign(n, 0.0);
  r.per_level_totals.assign(cfg.k_max, 0.0);
  for (int k = 1; k <= cfg.k_max; ++k) {
    const double wk = cfg.level_weights[k - 1];
    std::vector<double> level(n, 0.0);
    for (int ir = 0; ir < h; ++ir) {
      for (int ic = 0; ic < w; ++ic) {
        const int i = ir * w + ic;
        double sum_inv = 0.0;
        int count = 0;
        for (int jr = 0; jr < h; ++jr) {
          for (int jc = 0; jc < w; ++jc) {
            if (std::max(std::abs(jr - ir), std::abs(jc - ic)) != k) continue;
            const int j = jr * w + jc;
            const double d = mutual(p[i], p[j], same(i, j) ? 1.0 : 0.0) + cfg.alpha * regularizer(cfg.regularizer, p[i], p[j]);
            sum_inv += 1.0 / d;
            ++count;
          }
        }
        if (count == 0) throw std::invalid_argument("pixel without ring neighbors");
        level[i] = s[i] * sum_inv / count;
        r.attention_map[i] += wk * sum_inv / count;
      }
    }
    double level_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      r.loss_map[i] += wk * level[i];
      level_sum += wk * level[i];
    }
    r.per_level_totals[k - 1] = level_sum;
  }
  const double scale = cfg.reduction == Reduction::mean ? 1.0 / n : 1.0;
  for (double& t : r.per_level_totals) t *= scale;
  for (int i = 0; i < n; ++i) r.total += r.loss_map[i];
  r.total *= scale;
  return r;
}

}  // namespace

NaiveResult naive_loss(int height, int width, const std::vector<double>& pred, const std::vector<int>& labels,
                       const SCLossConfig& cfg) {
  const int n = height * width;
  std::vector<double> p(n), s(n);
  for (int i = 0; i < n; ++i) {
    p[i] = clamp(pred[i], cfg.epsilon);
    s[i] = single(cfg.single_response, p[i], labels[i]);
  }
  return evaluate(height, width, s, p, [&](int i, int j) { return labels[i] == 1 && labels[j] == 1; }, cfg);
}

NaiveResult naive_multiclass_loss(int height, int width, int classes, const std::vector<double>& probs,
                                  const std::vector<int>& labels, const SCLossConfig& cfg) {
  const int n = height * width;
  std::vector<double> p(n), s(n);
  for (int i = 0; i < n; ++i) {
    p[i] = clamp(probs[static_cast<std::size_t>(i) * classes + labels[i]], cfg.epsilon);
    s[i] = -std::log(p[i]);
  }
  return evaluate(height, width, s, p, [&](int i, int j) { return labels[i] == labels[j]; }, cfg);
}

}  // namespace oracle

#include "scloss/grad.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"
#include "scloss/error.hpp"
#include "scloss/lcg.hpp"
#include "scloss/loss.hpp"

namespace scloss {

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double relative_error(double analytic, double numeric) noexcept {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

namespace {

bool inside_clamp(double p, double epsilon) noexcept { return p >= epsilon && p <= 1.0 - epsilon; }

void check_step(double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) {
    fail(ErrorKind::invalid_argument, "finite-difference step must lie in [1e-6, 1e-3], got " + std::to_string(step));
  }
}

ProbabilityMap sigmoid_map(const FieldMap& logits) {
  std::vector<double> p(logits.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(logits[i])) fail(ErrorKind::invalid_argument, "non-finite logit at index " + std::to_string(i));
    p[i] = sigmoid(logits[i]);
  }
  return ProbabilityMap(logits.dims(), std::move(p));
}

}  // namespace

FieldMap grad_wrt_probs(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  const detail::Prepared in = detail::prepare_binary(pred, labels, cfg);
  std::vector<double> g = detail::gradient(in, cfg);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!inside_clamp(pred[i], cfg.epsilon)) g[i] = 0.0;
  }
  return FieldMap(pred.dims(), std::move(g));
}

FieldMap grad_wrt_logits(const FieldMap& logits, const LabelMap& labels, const SCLossConfig& cfg) {
  const ProbabilityMap p = sigmoid_map(logits);
  FieldMap g = grad_wrt_probs(p, labels, cfg);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= p[i] * (1.0 - p[i]);
  return g;
}

std::string_view to_string(FdScheme s) { return s == FdScheme::central2 ? "central2" : "central4"; }

std::optional<FdScheme> parse_fd_scheme(std::string_view s) {
  if (s == "central2") return FdScheme::central2;
  if (s == "central4") return FdScheme::central4;
  return std::nullopt;
}

namespace {

// f(x) evaluated at offsets +-h (and +-2h for central4).
template <class Eval>
double central(Eval&& f, double x, double h, FdScheme scheme) {
  const double d1 = f(x + h) - f(x - h);
  if (scheme == FdScheme::central2) return d1 / (2.0 * h);
  const double d2 = f(x + 2.0 * h) - f(x - 2.0 * h);
  return (8.0 * d1 - d2) / (12.0 * h);
}

double reach(double step, FdScheme scheme) { return scheme == FdScheme::central2 ? step : 2.0 * step; }

}  // namespace

FiniteDifference finite_diff_grad(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg,
                                  double step, FdScheme scheme) {
  check_step(step);
  FiniteDifference out{FieldMap(pred.dims(), 0.0), {}};
  std::vector<double> work(pred.vector());
  const double r = reach(step, scheme);
  for (std::size_t m = 0; m < work.size(); ++m) {
    const double base = pred[m];
    if (!inside_clamp(base - r, cfg.epsilon) || !inside_clamp(base + r, cfg.epsilon)) {
      out.clamp_hits.push_back(pred.dims().pos(m));
      if (base - r < 0.0 || base + r > 1.0) continue;  // left at 0
    }
    auto loss_at = [&](double x) {
      work[m] = x;
      return image_loss(ProbabilityMap(pred.dims(), work), labels, cfg).total;
    };
    out.gradient[m] = central(loss_at, base, step, scheme);
    work[m] = base;
  }
  return out;
}

FiniteDifference finite_diff_grad_logits(const FieldMap& logits, const LabelMap& labels, const SCLossConfig& cfg,
                                         double step, FdScheme scheme) {
  check_step(step);
  FiniteDifference out{FieldMap(logits.dims(), 0.0), {}};
  FieldMap work = logits;
  const double r = reach(step, scheme);
  for (std::size_t m = 0; m < work.size(); ++m) {
    const double base = logits[m];
    if (!inside_clamp(sigmoid(base + r), cfg.epsilon) || !inside_clamp(sigmoid(base - r), cfg.epsilon)) {
      out.clamp_hits.push_back(logits.dims().pos(m));
    }
    auto loss_at = [&](double z) {
      work[m] = z;
      return image_loss(sigmoid_map(work), labels, cfg).total;
    };
    out.gradient[m] = central(loss_at, base, step, scheme);
    work[m] = base;
  }
  return out;
}

GradReport grad_check(std::uint64_t seed, GridDims dims, const SCLossConfig& cfg, int trials, double step,
                      double tolerance, FdScheme scheme) {
  if (trials < 1) fail(ErrorKind::invalid_argument, "grad_check needs at least one trial");
  cfg.validate();
  check_step(step);
  GradReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  report.scheme = scheme;

  Lcg64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> p(dims.size());
    std::vector<int> n(dims.size());
    for (double& v : p) v = rng.uniform(0.05, 0.95);
    for (int& v : n) v = rng.coin() ? 1 : 0;
    const ProbabilityMap pred(dims, std::move(p));
    const LabelMap labels(dims, std::move(n));

    const FieldMap analytic = grad_wrt_probs(pred, labels, cfg);
    const FiniteDifference numeric = finite_diff_grad(pred, labels, cfg, step, scheme);
    for (std::size_t m = 0; m < dims.size(); ++m) {
      const PixelPos pos = dims.pos(m);
      if (std::find(numeric.clamp_hits.begin(), numeric.clamp_hits.end(), pos) != numeric.clamp_hits.end()) {
        ++report.pixels_skipped;
        continue;
      }
      ++report.pixels_checked;
      const double rel = relative_error(analytic[m], numeric.gradient[m]);
      report.max_abs_error = std::max(report.max_abs_error, std::abs(analytic[m] - numeric.gradient[m]));
      if (rel > report.max_rel_error || report.worst_trial < 0) {
        report.max_rel_error = std::max(rel, report.max_rel_error);
        report.worst_pixel = pos;
        report.worst_trial = t;
      }
    }
  }
  report.pass = report.max_rel_error <= tolerance;
  return report;
}

}  // namespace scloss

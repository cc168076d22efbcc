#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "scloss/config.hpp"
#include "scloss/grid.hpp"

namespace scloss {

double sigmoid(double z) noexcept;

/// d total / d p for every pixel. Pixels whose raw value lies outside
/// [epsilon, 1 - epsilon] get 0: the clamp is flat there.
FieldMap grad_wrt_probs(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

/// d total / d z with p = clamp(sigmoid(z)).
FieldMap grad_wrt_logits(const FieldMap& logits, const LabelMap& labels, const SCLossConfig& cfg);

enum class FdScheme {
  central2,  // [L(p+h) - L(p-h)] / 2h
  central4,  // [8(L(p+h) - L(p-h)) - (L(p+2h) - L(p-2h))] / 12h
};

std::string_view to_string(FdScheme s);
std::optional<FdScheme> parse_fd_scheme(std::string_view s);

struct FiniteDifference {
  FieldMap gradient;
  std::vector<PixelPos> clamp_hits;  // pixels whose +/- step touched the clamp
};

/// Central differences of image_loss(...).total, one pixel at a time.
/// step must lie in [1e-6, 1e-3].
FiniteDifference finite_diff_grad(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg,
                                  double step = 1e-4, FdScheme scheme = FdScheme::central2);

/// Central differences in logit space; the objective is image_loss at sigmoid(z).
FiniteDifference finite_diff_grad_logits(const FieldMap& logits, const LabelMap& labels, const SCLossConfig& cfg,
                                         double step = 1e-4, FdScheme scheme = FdScheme::central2);

/// |a - f| / max(|a|, |f|, 1e-8)
double relative_error(double analytic, double numeric) noexcept;

struct GradReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  PixelPos worst_pixel{};
  int worst_trial = -1;
  int trials = 0;
  std::size_t pixels_checked = 0;
  std::size_t pixels_skipped = 0;  // clamp hits
  double tolerance = 0.0;
  FdScheme scheme = FdScheme::central4;
  bool pass = false;
};

/// Compares grad_wrt_probs with finite_diff_grad over seeded random instances:
/// p uniform in [0.05, 0.95], labels fair coin flips, both drawn from Lcg64(seed).
/// The two-point scheme's O(h^2) error exceeds 1e-4 relative wherever a
/// pixel's gradient contributions nearly cancel, hence the central4 default.
GradReport grad_check(std::uint64_t seed, GridDims dims, const SCLossConfig& cfg, int trials, double step,
                      double tolerance, FdScheme scheme = FdScheme::central4);

}  // namespace scloss

#pragma once

// Whole-image evaluation shared by the forward pass, the gradient and the
// simulator. Operates on already-clamped probabilities.

#include <vector>

#include "scloss/config.hpp"
#include "scloss/grid.hpp"
#include "scloss/loss.hpp"

namespace scloss::detail {

struct Prepared {
  GridDims dims;
  std::vector<double> p;       // clamped probabilities (true-class in multi-class mode)
  std::vector<double> codes;   // labels as doubles: {0,1} or class index
  std::vector<double> single;  // single-response target per pixel
  PairRule rule = PairRule::product;
  SingleResponse kind = SingleResponse::bce;
};

// Clamps pred, validates labels as binary, checks sizes.
Prepared prepare_binary(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg);

// 1/N_i^k for every pixel and level 1..k_max; throws degenerate_geometry when
// some pixel has an empty in-bounds ring.
std::vector<std::vector<double>> ring_counts(GridDims dims, int k_max);

LossBreakdown forward(const Prepared& in, const SCLossConfig& cfg);

// d total / d p for the clamped probabilities (no clamp masking).
std::vector<double> gradient(const Prepared& in, const SCLossConfig& cfg);

double reduction_scale(const SCLossConfig& cfg, std::size_t pixels);

}  // namespace scloss::detail

#pragma once

// Self-contained test cases for cross-implementation parity.
//
// Inputs come from Lcg64(seed): height*width uniform draws give pred in
// row-major order, then height*width further draws give labels (draw < 0.5).
// Expected outputs are the total, the per-pixel loss and attention maps and
// d total / d pred. Reals are written with 17 significant digits.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scloss/config.hpp"
#include "scloss/grid.hpp"

namespace scloss::io {

struct GoldenVector {
  std::uint64_t seed = 0;
  GridDims dims;
  SCLossConfig config;
  std::vector<double> pred;
  std::vector<int> labels;
  double total = 0.0;
  std::vector<double> per_level_totals;
  std::vector<double> loss_map;
  std::vector<double> attention_map;
  std::vector<double> gradient;
};

GoldenVector make_golden(std::uint64_t seed, GridDims dims, const SCLossConfig& cfg);

/// Byte-stable JSON text.
std::string golden_to_json(const GoldenVector& g);
GoldenVector golden_from_json(const std::string& text);

void write_golden(const std::filesystem::path& path, const GoldenVector& g);
GoldenVector read_golden(const std::filesystem::path& path);

struct GoldenCheck {
  bool pass = false;
  double max_rel_error = 0.0;
  std::string worst_field;
  double tolerance = 0.0;
};

/// Recomputes everything from the embedded inputs and compares.
GoldenCheck verify_golden(const GoldenVector& g, double tolerance = 1e-12);

}  // namespace scloss::io

#pragma once

// Logit-field gradient descent on synthetic scenes. Each pixel carries its own
// logit z; a per-pixel difficulty d in [0,1) scales its step by (1 - d), which
// stands in for regions a model finds hard to fit.

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "scloss/config.hpp"
#include "scloss/grid.hpp"

namespace scloss::sim {

// Geometry in pixel coordinates: x is the column, y the row.
struct Disk {
  double cx = 0, cy = 0, r = 0;  // inclusive: dist <= r
};
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive corners
};
struct Ring {
  double cx = 0, cy = 0, r_in = 0, r_out = 0;  // r_in <= dist <= r_out
};

struct Shape {
  std::variant<Disk, Rect, Ring> geometry;
  int label = 1;
  double difficulty = 0.0;
};

struct SceneSpec {
  GridDims dims;
  std::vector<Shape> shapes;  // painted in order over a label-0, difficulty-0 background
};

struct Scene {
  LabelMap labels;
  FieldMap difficulty;
};

/// 64x64: foreground disk r=22 (d=0) with a concentric hard disk r=9 (d=0.8).
SceneSpec canonical_phantom();

Scene build_scene(const SceneSpec& spec);

struct RegionMasks {
  LabelMap hard;      // d >= threshold
  LabelMap boundary;  // hard pixels with a level-1 neighbor outside hard
  LabelMap core;      // hard pixels left after eroding hard by 3 (7x7 window; outside the image counts as not hard)
  std::size_t hard_count = 0;
  std::size_t boundary_count = 0;
  std::size_t core_count = 0;
  std::vector<std::string> warnings;
};

/// Throws when the hard region is empty or the threshold is out of range.
RegionMasks region_masks(const Scene& scene, double hard_threshold);

enum class Mode { scloss, single_response_only };

struct SimConfig {
  int steps = 2000;
  double learning_rate = 0.5;
  int snapshot_every = 100;
  std::uint64_t seed = 0;  // recorded only; the dynamics are deterministic
  SCLossConfig loss = default_loss();
  Mode mode = Mode::scloss;
  double hard_threshold = 0.5;

  /// Loss defaults with sum reduction, so the per-pixel step does not shrink
  /// with image size.
  static SCLossConfig default_loss();
  void validate() const;
};

struct RegionStats {
  double total_loss = 0.0;
  double easy_mae = 0.0;
  double hard_mae = 0.0;
  double core_mae = 0.0;
  double boundary_attention_mean = 0.0;
  double core_attention_mean = 0.0;
};

struct Snapshot {
  int step = 0;
  FieldMap prediction;
  FieldMap attention;  // constant 1 in single_response_only mode
  RegionStats stats;
};

struct Trajectory {
  LabelMap labels;
  RegionMasks masks;  // built with SimConfig::hard_threshold; empty when no pixel is hard
  std::vector<Snapshot> snapshots;  // step 0, every snapshot_every steps, and the last step
  double final_mae = 0.0;
};

/// Throws Error(divergence) if any |z| exceeds 50.
Trajectory run_descent(const Scene& scene, const SimConfig& cfg);

enum class Verdict { holds, violated, inconclusive };

struct BoundaryFirstReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<int> mid_steps;  // snapshots with the easy region learned and the core not
  double min_attention_ratio = 0.0;  // min over mid snapshots of boundary/core attention
  double boundary_median_crossing = std::numeric_limits<double>::infinity();
  double core_median_crossing = std::numeric_limits<double>::infinity();
  double learned_mae = 0.1;
  std::string message;
};

/// A pixel counts as learned from the first snapshot where |p - label| <
/// learned_mae. Mid-training snapshots have easy-region MAE below learned_mae
/// and core MAE above it. The check holds when every mid-training snapshot has
/// higher mean attention on the boundary than on the core and the boundary's
/// median learning step is no later than the core's.
///
/// Starting from z = 0 every pixel sits exactly on p = 0.5, so a 0.5 level
/// would be crossed by all foreground pixels on the first step.
BoundaryFirstReport assert_boundary_first(const Trajectory& traj, const RegionMasks& masks, double learned_mae = 0.1);

std::string_view to_string(Verdict v);

/// CSV log: step,total_loss,easy_mae,hard_mae,boundary_attention_mean,core_attention_mean
std::string trajectory_csv(const Trajectory& traj);

}  // namespace scloss::sim

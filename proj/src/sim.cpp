#include "scloss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "engine.hpp"
#include "scloss/error.hpp"
#include "scloss/grad.hpp"
#include "scloss/kernels.hpp"
#include "scloss/loss.hpp"

namespace scloss::sim {

namespace {

constexpr double kLogitLimit = 50.0;

bool covers(const Shape& s, int row, int col) {
  const double x = col, y = row;
  return std::visit(
      [&](const auto& g) -> bool {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Disk>) {
          return (x - g.cx) * (x - g.cx) + (y - g.cy) * (y - g.cy) <= g.r * g.r;
        } else if constexpr (std::is_same_v<G, Rect>) {
          return col >= g.x0 && col <= g.x1 && row >= g.y0 && row <= g.y1;
        } else {
          const double d2 = (x - g.cx) * (x - g.cx) + (y - g.cy) * (y - g.cy);
          return d2 >= g.r_in * g.r_in && d2 <= g.r_out * g.r_out;
        }
      },
      s.geometry);
}

void check_shape(const Shape& s, std::size_t index) {
  const std::string where = "shape " + std::to_string(index);
  if (s.label != 0 && s.label != 1) fail(ErrorKind::invalid_argument, where + ": label must be 0 or 1");
  if (!(s.difficulty >= 0.0 && s.difficulty < 1.0)) fail(ErrorKind::invalid_argument, where + ": difficulty must lie in [0,1)");
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Disk>) {
          if (!(g.r >= 0.0)) fail(ErrorKind::invalid_argument, where + ": disk radius must be non-negative");
        } else if constexpr (std::is_same_v<G, Rect>) {
          if (g.x1 < g.x0 || g.y1 < g.y0) fail(ErrorKind::invalid_argument, where + ": rect corners are inverted");
        } else {
          if (!(g.r_in >= 0.0 && g.r_out >= g.r_in)) fail(ErrorKind::invalid_argument, where + ": ring needs 0 <= r_in <= r_out");
        }
      },
      s.geometry);
}

RegionMasks build_masks(const Scene& scene, double threshold) {
  const GridDims dims = scene.labels.dims();
  RegionMasks m{LabelMap(dims, 0), LabelMap(dims, 0), LabelMap(dims, 0), 0, 0, 0, {}};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    m.hard[i] = scene.difficulty[i] >= threshold ? 1 : 0;
    m.hard_count += static_cast<std::size_t>(m.hard[i]);
  }
  auto is_hard = [&](int r, int c) { return dims.contains({r, c}) && m.hard.at({r, c}) == 1; };
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (m.hard[i] == 0) continue;
    const PixelPos pos = dims.pos(i);
    for (const PixelPos q : ring_neighbors(pos, 1, dims)) {
      if (m.hard.at(q) == 0) {
        m.boundary[i] = 1;
        break;
      }
    }
    bool interior = true;
    for (int dr = -3; dr <= 3 && interior; ++dr) {
      for (int dc = -3; dc <= 3 && interior; ++dc) interior = is_hard(pos.row + dr, pos.col + dc);
    }
    m.core[i] = interior ? 1 : 0;
    m.boundary_count += static_cast<std::size_t>(m.boundary[i]);
    m.core_count += static_cast<std::size_t>(m.core[i]);
  }
  if (m.hard_count > 0 && m.core_count == 0) m.warnings.push_back("hard region is too thin for a core (erosion by 3 leaves nothing)");
  return m;
}

double masked_mean(const FieldMap& f, const LabelMap& mask, bool invert = false) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if ((mask[i] == 1) != invert) {
      sum += f[i];
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

FieldMap abs_error(const FieldMap& p, const LabelMap& labels) {
  FieldMap e(p.dims(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) e[i] = std::abs(p[i] - labels[i]);
  return e;
}

ProbabilityMap to_probs(const FieldMap& z) {
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = sigmoid(z[i]);
  return ProbabilityMap(z.dims(), std::move(p));
}

// Gradient of the reduced single-response loss alone, in logit space.
FieldMap single_only_grad(const ProbabilityMap& p, const LabelMap& labels, const SCLossConfig& cfg) {
  const detail::Prepared in = detail::prepare_binary(p, labels, cfg);
  std::vector<double> s(in.p.size()), ds(in.p.size());
  kernels::active().single_response(in.p.data(), in.single.data(), in.p.size(), in.kind, s.data(), ds.data());
  const double scale = detail::reduction_scale(cfg, in.p.size());
  FieldMap g(p.dims(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool clamped = p[i] < cfg.epsilon || p[i] > 1.0 - cfg.epsilon;
    g[i] = clamped ? 0.0 : scale * ds[i] * p[i] * (1.0 - p[i]);
  }
  return g;
}

Snapshot take_snapshot(int step, const FieldMap& z, const Scene& scene, const RegionMasks& masks, const SimConfig& cfg) {
  const ProbabilityMap p = to_probs(z);
  Snapshot snap;
  snap.step = step;
  snap.prediction = FieldMap(p.dims(), p.vector());
  if (cfg.mode == Mode::scloss) {
    LossBreakdown lb = image_loss(p, scene.labels, cfg.loss);
    snap.stats.total_loss = lb.total;
    snap.attention = std::move(lb.attention_map);
  } else {
    const FieldMap s = bce_loss_map(p, scene.labels, cfg.loss);
    double sum = 0.0;
    for (const double v : s.values()) sum += v;
    snap.stats.total_loss = sum * detail::reduction_scale(cfg.loss, s.size());
    snap.attention = FieldMap(p.dims(), 1.0);
  }
  const FieldMap err = abs_error(snap.prediction, scene.labels);
  snap.stats.easy_mae = masked_mean(err, masks.hard, true);
  snap.stats.hard_mae = masked_mean(err, masks.hard);
  snap.stats.core_mae = masked_mean(err, masks.core);
  snap.stats.boundary_attention_mean = masked_mean(snap.attention, masks.boundary);
  snap.stats.core_attention_mean = masked_mean(snap.attention, masks.core);
  return snap;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

SceneSpec canonical_phantom() {
  SceneSpec spec;
  spec.dims = GridDims(64, 64);
  spec.shapes.push_back({Disk{32.0, 32.0, 22.0}, 1, 0.0});
  spec.shapes.push_back({Disk{32.0, 32.0, 9.0}, 1, 0.8});
  return spec;
}

Scene build_scene(const SceneSpec& spec) {
  Scene scene{LabelMap(spec.dims, 0), FieldMap(spec.dims, 0.0)};
  for (std::size_t s = 0; s < spec.shapes.size(); ++s) {
    const Shape& shape = spec.shapes[s];
    check_shape(shape, s);
    std::size_t painted = 0;
    for (int r = 0; r < spec.dims.height; ++r) {
      for (int c = 0; c < spec.dims.width; ++c) {
        if (!covers(shape, r, c)) continue;
        scene.labels.at({r, c}) = shape.label;
        scene.difficulty.at({r, c}) = shape.difficulty;
        ++painted;
      }
    }
    if (painted == 0) fail(ErrorKind::invalid_argument, "shape " + std::to_string(s) + " does not intersect the image");
  }
  return scene;
}

RegionMasks region_masks(const Scene& scene, double hard_threshold) {
  double max_d = 0.0;
  for (const double d : scene.difficulty.values()) max_d = std::max(max_d, d);
  if (!(hard_threshold > 0.0 && hard_threshold <= max_d)) {
    fail(ErrorKind::invalid_argument, "hard threshold must lie in (0, max difficulty = " + std::to_string(max_d) + "]");
  }
  RegionMasks m = build_masks(scene, hard_threshold);
  if (m.hard_count == 0) fail(ErrorKind::invalid_argument, "hard region is empty");
  return m;
}

SCLossConfig SimConfig::default_loss() {
  SCLossConfig c;
  c.reduction = Reduction::sum;
  return c;
}

void SimConfig::validate() const {
  if (steps < 1) fail(ErrorKind::config, "steps must be >= 1");
  if (snapshot_every < 1) fail(ErrorKind::config, "snapshot_every must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) fail(ErrorKind::config, "learning rate must be finite and >= 0");
  if (!(hard_threshold > 0.0 && hard_threshold < 1.0)) fail(ErrorKind::config, "hard threshold must lie in (0,1)");
  loss.validate();
}

Trajectory run_descent(const Scene& scene, const SimConfig& cfg) {
  cfg.validate();
  require_same_dims(scene.labels.dims(), scene.difficulty.dims(), "scene labels/difficulty");
  const GridDims dims = scene.labels.dims();

  Trajectory traj;
  traj.labels = scene.labels;
  traj.masks = build_masks(scene, cfg.hard_threshold);

  FieldMap z(dims, 0.0);
  traj.snapshots.push_back(take_snapshot(0, z, scene, traj.masks, cfg));

  for (int step = 1; step <= cfg.steps; ++step) {
    const FieldMap g = cfg.mode == Mode::scloss ? grad_wrt_logits(z, scene.labels, cfg.loss)
                                                : single_only_grad(to_probs(z), scene.labels, cfg.loss);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] -= cfg.learning_rate * (1.0 - scene.difficulty[i]) * g[i];
      if (!(std::abs(z[i]) <= kLogitLimit)) {
        const PixelPos pos = dims.pos(i);
        fail(ErrorKind::divergence, "logit at (" + std::to_string(pos.row) + "," + std::to_string(pos.col) + ") reached " +
                                        std::to_string(z[i]) + " at step " + std::to_string(step));
      }
    }
    if (step % cfg.snapshot_every == 0 || step == cfg.steps) {
      traj.snapshots.push_back(take_snapshot(step, z, scene, traj.masks, cfg));
    }
  }
  traj.final_mae = masked_mean(abs_error(traj.snapshots.back().prediction, scene.labels), LabelMap(dims, 1));
  return traj;
}

BoundaryFirstReport assert_boundary_first(const Trajectory& traj, const RegionMasks& masks, double learned_mae) {
  if (!(learned_mae > 0.0 && learned_mae < 1.0)) fail(ErrorKind::invalid_argument, "learned_mae must lie in (0,1)");
  BoundaryFirstReport rep;
  rep.learned_mae = learned_mae;
  if (traj.snapshots.size() < 3) {
    rep.message = "need at least 3 snapshots";
    return rep;
  }
  if (masks.boundary_count == 0 || masks.core_count == 0) {
    rep.message = "empty boundary or core mask";
    return rep;
  }

  bool attention_ok = true;
  rep.min_attention_ratio = std::numeric_limits<double>::infinity();
  for (const Snapshot& s : traj.snapshots) {
    if (!(s.stats.easy_mae < learned_mae && s.stats.core_mae > learned_mae)) continue;
    rep.mid_steps.push_back(s.step);
    const double ratio = s.stats.boundary_attention_mean / s.stats.core_attention_mean;
    rep.min_attention_ratio = std::min(rep.min_attention_ratio, ratio);
    attention_ok = attention_ok && s.stats.boundary_attention_mean > s.stats.core_attention_mean;
  }
  if (rep.mid_steps.empty()) {
    rep.min_attention_ratio = 0.0;
    rep.message = "no snapshot has the easy region learned while the core is not";
    return rep;
  }

  const GridDims dims = traj.labels.dims();
  std::vector<double> crossing(dims.size(), std::numeric_limits<double>::infinity());
  for (const Snapshot& s : traj.snapshots) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (std::isinf(crossing[i]) && std::abs(s.prediction[i] - traj.labels[i]) < learned_mae) crossing[i] = s.step;
    }
  }
  std::vector<double> b, c;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (masks.boundary[i] == 1) b.push_back(crossing[i]);
    if (masks.core[i] == 1) c.push_back(crossing[i]);
  }
  rep.boundary_median_crossing = median(std::move(b));
  rep.core_median_crossing = median(std::move(c));
  const bool order_ok = rep.boundary_median_crossing <= rep.core_median_crossing;

  rep.verdict = attention_ok && order_ok ? Verdict::holds : Verdict::violated;
  if (!attention_ok) rep.message = "core attention reached boundary attention in a mid-training snapshot";
  else if (!order_ok) rep.message = "core learned before the boundary";
  else rep.message = "boundary learned first";
  return rep;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "step,total_loss,easy_mae,hard_mae,boundary_attention_mean,core_attention_mean\n";
  char line[256];
  for (const Snapshot& s : traj.snapshots) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.step, s.stats.total_loss, s.stats.easy_mae,
                  s.stats.hard_mae, s.stats.boundary_attention_mean, s.stats.core_attention_mean);
    out += line;
  }
  return out;
}

}  // namespace scloss::sim

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "scloss/error.hpp"
#include "scloss/grad.hpp"
#include "scloss/io/golden.hpp"
#include "scloss/io/image_io.hpp"
#include "scloss/io/json_io.hpp"
#include "scloss/io/raw_io.hpp"
#include "scloss/io/toml_io.hpp"
#include "scloss/kernels.hpp"
#include "scloss/loss.hpp"
#include "scloss/metrics.hpp"
#include "scloss/sim.hpp"

namespace scloss::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_fail(const std::string& msg) { fail(ErrorKind::config, msg); }

GridDims parse_size(const std::string& s) {
  int h = 0, w = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%dx%d%c", &h, &w, &tail) == 2) return {h, w};
  if (std::sscanf(s.c_str(), "%d%c", &h, &tail) == 1) return {h, h};
  fail(ErrorKind::invalid_argument, "size must look like HxW or N, got '" + s + "'");
}

// Images or SCF1 files.
ProbabilityMap read_pred(const std::string& path) {
  try {
    if (io::is_scf(path)) {
      FieldMap f = io::read_scf(path);
      return ProbabilityMap(f.dims(), f.vector());
    }
    return io::to_probability(io::read_image(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

// SCF1 ground truth follows the image rule with maxval 1.
LabelMap labels_from_field(const FieldMap& f, std::optional<double> soft) {
  if (soft && !(*soft >= 0.0 && *soft < 1.0)) fail(ErrorKind::invalid_argument, "soft ground-truth threshold must lie in [0,1)");
  LabelMap out(f.dims(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (soft) {
      out[i] = f[i] > *soft ? 1 : 0;
    } else if (f[i] == 0.0 || f[i] == 1.0) {
      out[i] = f[i] == 1.0 ? 1 : 0;
    } else {
      fail(ErrorKind::invalid_argument, "ground truth is not binary at index " + std::to_string(i) +
                                            "; pass a soft threshold to binarize");
    }
  }
  return out;
}

LabelMap read_gt(const std::string& path, std::optional<double> soft) {
  try {
    if (io::is_scf(path)) return labels_from_field(io::read_scf(path), soft);
    return io::to_labels(io::read_image(path), soft);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

struct Inputs {
  ProbabilityMap pred;
  LabelMap gt;
};

Inputs read_inputs(const InputFlags& in) {
  Inputs x{read_pred(in.pred), read_gt(in.gt, in.soft_gt_threshold)};
  if (!(x.pred.dims() == x.gt.dims())) {
    fail(ErrorKind::dimension_mismatch, "prediction " + in.pred + " is " + x.pred.dims().to_string() + " but ground truth " +
                                            in.gt + " is " + x.gt.dims().to_string());
  }
  return x;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, path.string() + ": cannot open for writing");
  f << text;
  if (!f) fail(ErrorKind::io, path.string() + ": write failed");
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, dir.string() + ": " + ec.message());
}

ojson range_json(const io::Normalized& n) { return {{"min", n.min}, {"max", n.max}}; }

// Writes the map as SCF1 when raw, else as a min-max normalized PGM.
ojson write_map(const fs::path& path, const FieldMap& map, bool raw) {
  if (raw) {
    io::write_scf(path, map);
    return {{"path", path.string()}, {"format", "scf1"}};
  }
  const io::Normalized n = io::normalize_u8(map);
  io::write_pgm(path, n.image);
  ojson j = range_json(n);
  j["path"] = path.string();
  return j;
}

}  // namespace

SCLossConfig LossFlags::resolve(SCLossConfig base) const {
  SCLossConfig cfg = config_path.empty() ? std::move(base) : io::load_config(config_path);
  if (k_max) {
    if (*k_max < 1 || *k_max > 64) config_fail("--k-max must lie in 1..64");
    cfg.with_levels(*k_max);
  }
  if (level_weights) {
    cfg.level_weights = *level_weights;
    if (!k_max) cfg.k_max = static_cast<int>(level_weights->size());
  }
  if (alpha) cfg.alpha = *alpha;
  if (epsilon) cfg.epsilon = *epsilon;
  if (addon_weight) cfg.addon_weight = *addon_weight;
  if (single_response) {
    const auto v = parse_single_response(*single_response);
    if (!v) config_fail("unknown single response '" + *single_response + "'");
    cfg.single_response = *v;
  }
  if (regularizer) {
    const auto v = parse_regularizer(*regularizer);
    if (!v) config_fail("unknown regularizer '" + *regularizer + "'");
    cfg.regularizer = *v;
  }
  if (reduction) {
    const auto v = parse_reduction(*reduction);
    if (!v) config_fail("unknown reduction '" + *reduction + "'");
    cfg.reduction = *v;
  }
  cfg.validate();
  return cfg;
}

int run_eval(const EvalOptions& o, std::ostream& out) {
  if (!o.golden.empty()) {
    const io::GoldenVector g = io::read_golden(o.golden);
    const LossBreakdown lb = image_loss(ProbabilityMap(g.dims, g.pred), LabelMap(g.dims, g.labels), g.config);
    const io::GoldenCheck check = io::verify_golden(g);
    ojson j = io::loss_report(lb, g.config);
    j["golden"] = {{"path", o.golden}, {"pass", check.pass}, {"max_rel_error", check.max_rel_error},
                   {"worst_field", check.worst_field}, {"tolerance", check.tolerance}};
    out << j.dump(2) << "\n";
    return check.pass ? ok : check_failed;
  }
  const SCLossConfig cfg = o.loss.resolve();
  const Inputs x = read_inputs(o.in);
  const LossBreakdown lb = image_loss(x.pred, x.gt, cfg);
  ojson j = io::loss_report(lb, cfg);
  j["dims"] = x.pred.dims().to_string();
  j["kernel_variant"] = kernels::active().name;
  if (!o.loss_map.empty()) j["loss_map"] = write_map(o.loss_map, lb.loss_map, o.raw);
  if (!o.attention_map.empty()) j["attention_map"] = write_map(o.attention_map, lb.attention_map, o.raw);
  out << j.dump(2) << "\n";
  return ok;
}

int run_compare(const CompareOptions& o, std::ostream& out) {
  const SCLossConfig cfg = o.loss.resolve();
  const Inputs x = read_inputs(o.in);
  const LossBreakdown lb = image_loss(x.pred, x.gt, cfg);
  const FieldMap bce = bce_loss_map(x.pred, x.gt, cfg);

  const fs::path dir(o.out_dir);
  make_dir(dir);
  ojson side;
  side["normalization"] = "min-max per map; pixel = round(255 * (v - min) / (max - min)), 0 when max == min";
  side["bce_map"] = write_map(dir / "bce_map.pgm", bce, false);
  side["scloss_map"] = write_map(dir / "scloss_map.pgm", lb.loss_map, false);
  side["attention_map"] = write_map(dir / "attention_map.pgm", lb.attention_map, false);
  if (o.raw) {
    io::write_scf(dir / "bce_map.scf", bce);
    io::write_scf(dir / "scloss_map.scf", lb.loss_map);
    io::write_scf(dir / "attention_map.scf", lb.attention_map);
  }
  side["total"] = lb.total;
  side["config"] = io::to_json(cfg);
  write_text(dir / "compare.json", side.dump(2) + "\n");
  out << side.dump(2) << "\n";
  return ok;
}

int run_gradcheck(const GradcheckOptions& o, std::ostream& out) {
  const SCLossConfig cfg = o.loss.resolve();
  const GridDims dims = parse_size(o.size);
  if (o.trials < 1) fail(ErrorKind::invalid_argument, "--trials must be >= 1");
  if (!(o.tol >= 0.0)) fail(ErrorKind::invalid_argument, "--tol must be >= 0");
  const auto scheme = parse_fd_scheme(o.fd_scheme);
  if (!scheme) fail(ErrorKind::invalid_argument, "--fd-scheme must be central2 or central4");
  const GradReport r = grad_check(o.seed, dims, cfg, o.trials, o.step, o.tol, *scheme);
  ojson j = io::to_json(r);
  j["seed"] = o.seed;
  j["size"] = dims.to_string();
  j["step"] = o.step;
  j["config"] = io::to_json(cfg);
  out << j.dump(2) << "\n";
  return r.pass ? ok : check_failed;
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  sim::SimConfig sc;
  sc.steps = o.steps;
  sc.learning_rate = o.lr;
  sc.snapshot_every = o.snapshot_every;
  sc.seed = o.seed;
  sc.hard_threshold = o.hard_threshold;
  if (o.baseline == "scloss") {
    sc.mode = sim::Mode::scloss;
  } else if (o.baseline == "single_response_only") {
    sc.mode = sim::Mode::single_response_only;
  } else {
    config_fail("--baseline must be scloss or single_response_only");
  }
  sc.loss = o.loss.resolve(sim::SimConfig::default_loss());
  sc.validate();

  const sim::SceneSpec spec = o.scene.empty() ? sim::canonical_phantom() : io::load_scene(o.scene);
  const sim::Scene scene = sim::build_scene(spec);
  const sim::Trajectory traj = sim::run_descent(scene, sc);
  const sim::BoundaryFirstReport rep = sim::assert_boundary_first(traj, traj.masks, o.learned_mae);

  const fs::path dir(o.out_dir);
  make_dir(dir);
  write_text(dir / "trajectory.csv", sim::trajectory_csv(traj));
  if (!o.no_images) {
    double lo = traj.snapshots.front().attention[0], hi = lo;
    for (const auto& s : traj.snapshots) {
      const auto v = s.attention.values();
      const auto [a, b] = std::minmax_element(v.begin(), v.end());
      lo = std::min(lo, *a);
      hi = std::max(hi, *b);
    }
    for (const auto& s : traj.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "pred_%05d.pgm", s.step);
      io::write_pgm(dir / name, io::from_unit_field(s.prediction));
      std::snprintf(name, sizeof name, "attention_%05d.pgm", s.step);
      io::write_pgm(dir / name, io::normalize_u8(s.attention, lo, hi));
    }
  }

  ojson j = io::to_json(rep);
  j["snapshots"] = traj.snapshots.size();
  j["final_mae"] = traj.final_mae;
  j["boundary_pixels"] = traj.masks.boundary_count;
  j["core_pixels"] = traj.masks.core_count;
  j["warnings"] = traj.masks.warnings;
  j["mode"] = o.baseline;
  j["steps"] = sc.steps;
  j["learning_rate"] = sc.learning_rate;
  j["config"] = io::to_json(sc.loss);
  write_text(dir / "report.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";

  if (rep.verdict == sim::Verdict::holds) return ok;
  if (rep.verdict == sim::Verdict::inconclusive && !o.strict) return ok;
  return check_failed;
}

int run_metrics(const MetricsOptions& o, std::ostream& out) {
  const Inputs x = read_inputs(o.in);
  out << io::to_json(metrics::evaluate(x.pred, x.gt), o.curve).dump(2) << "\n";
  return ok;
}

int run_golden(const GoldenOptions& o, std::ostream& out) {
  if (!o.verify.empty()) {
    const io::GoldenCheck c = io::verify_golden(io::read_golden(o.verify));
    out << ojson{{"path", o.verify}, {"pass", c.pass}, {"max_rel_error", c.max_rel_error}, {"worst_field", c.worst_field},
                 {"tolerance", c.tolerance}}
               .dump(2)
        << "\n";
    return c.pass ? ok : check_failed;
  }
  const SCLossConfig base = o.loss.resolve();
  const GridDims dims = parse_size(o.size);
  if (o.all_combinations_dir.empty()) {
    io::write_golden(o.out, io::make_golden(o.seed, dims, base));
    out << ojson{{"written", o.out}}.dump(2) << "\n";
    return ok;
  }
  const fs::path dir(o.all_combinations_dir);
  make_dir(dir);
  ojson written = ojson::array();
  for (const SingleResponse s : {SingleResponse::bce, SingleResponse::mse, SingleResponse::l1}) {
    for (const Regularizer r : {Regularizer::gaussian, Regularizer::distance, Regularizer::constant}) {
      SCLossConfig cfg = base;
      cfg.single_response = s;
      cfg.regularizer = r;
      const fs::path path = dir / ("golden_" + std::string(to_string(s)) + "_" + std::string(to_string(r)) + ".json");
      io::write_golden(path, io::make_golden(o.seed, dims, cfg));
      written.push_back(path.string());
    }
  }
  out << ojson{{"written", written}}.dump(2) << "\n";
  return ok;
}

}  // namespace scloss::cli

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "scloss/config.hpp"

namespace scloss::cli {

enum Exit : int { ok = 0, check_failed = 1, input_error = 2, config_error = 3, diverged = 4 };

// Loss settings: an optional TOML file, then individual flag overrides.
struct LossFlags {
  std::string config_path;
  std::optional<int> k_max;
  std::optional<double> alpha;
  std::optional<std::string> single_response;
  std::optional<std::string> regularizer;
  std::optional<double> epsilon;
  std::optional<std::string> reduction;
  std::optional<std::vector<double>> level_weights;
  std::optional<double> addon_weight;

  SCLossConfig resolve(SCLossConfig base = {}) const;
};

struct InputFlags {
  std::string pred;
  std::string gt;
  std::optional<double> soft_gt_threshold;
};

struct EvalOptions {
  InputFlags in;
  LossFlags loss;
  std::string golden;  // evaluate a golden file's embedded inputs instead
  std::string loss_map;
  std::string attention_map;
  bool raw = false;
};

struct CompareOptions {
  InputFlags in;
  LossFlags loss;
  std::string out_dir;
  bool raw = false;
};

struct GradcheckOptions {
  std::uint64_t seed = 1;
  std::string size = "8x8";
  int trials = 100;
  double step = 1e-4;
  double tol = 1e-4;
  std::string fd_scheme = "central4";
  LossFlags loss;
};

struct SimulateOptions {
  std::string scene;  // empty: built-in canonical phantom
  std::string out_dir = "sim_out";
  int steps = 2000;
  double lr = 0.5;
  int snapshot_every = 100;
  std::uint64_t seed = 0;
  std::string baseline = "scloss";
  double hard_threshold = 0.5;
  double learned_mae = 0.1;
  bool strict = false;
  bool no_images = false;
  LossFlags loss;
};

struct MetricsOptions {
  InputFlags in;
  bool curve = false;
};

struct GoldenOptions {
  std::uint64_t seed = 42;
  std::string size = "8x8";
  std::string out = "golden.json";
  std::string all_combinations_dir;  // writes one file per single-response x regularizer pair
  std::string verify;
  LossFlags loss;
};

int run_eval(const EvalOptions& o, std::ostream& out);
int run_compare(const CompareOptions& o, std::ostream& out);
int run_gradcheck(const GradcheckOptions& o, std::ostream& out);
int run_simulate(const SimulateOptions& o, std::ostream& out);
int run_metrics(const MetricsOptions& o, std::ostream& out);
int run_golden(const GoldenOptions& o, std::ostream& out);

}  // namespace scloss::cli

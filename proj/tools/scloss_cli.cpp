// scloss: evaluate, compare, gradient-check, simulate, score and export golden vectors.
//
// Exit codes: 0 success, 1 check failed, 2 I/O or input error, 3 invalid
// config, 4 numerical divergence.

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "scloss/error.hpp"

namespace {

using namespace scloss::cli;

void add_loss_flags(CLI::App* cmd, LossFlags& f, bool sim_defaults = false) {
  cmd->add_option("--config", f.config_path, "TOML file with SCLossConfig fields; flags below override it")
      ->check(CLI::ExistingFile);
  cmd->add_option("--k-max", f.k_max, "Adjacency levels K (default 2; resets level weights to 1, 1/2, ...)");
  cmd->add_option("--alpha", f.alpha, "Regularizer weight alpha (default 1)");
  cmd->add_option("--single-response", f.single_response, "bce | mse | l1 | cross_entropy (default bce)");
  cmd->add_option("--regularizer", f.regularizer, "gaussian | distance | constant (default gaussian)");
  cmd->add_option("--epsilon", f.epsilon, "Probability clamp epsilon (default 1e-7)");
  cmd->add_option("--reduction", f.reduction,
                  sim_defaults ? "mean | sum (default sum for the simulator)" : "mean | sum (default mean)");
  cmd->add_option("--level-weights", f.level_weights, "Per-level weights w_1..w_K (default 1, 1/2, 1/4, ...)")
      ->expected(1, 64);
  cmd->add_option("--addon-weight", f.addon_weight, "Add-on weight lambda (default 1)");
}

void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--pred", f.pred, "Prediction: PGM, PNG or SCF1 file")->required();
  cmd->add_option("--gt", f.gt, "Ground truth: PGM, PNG or SCF1 file (values must be 0 or max)")->required();
  cmd->add_option("--soft-gt-threshold", f.soft_gt_threshold,
                  "Binarize ground truth as value/max > T instead of requiring exact 0/max (0.5 matches > 127 for 8-bit)");
}

int exit_code(scloss::ErrorKind k) {
  switch (k) {
    case scloss::ErrorKind::config: return config_error;
    case scloss::ErrorKind::divergence: return diverged;
    default: return input_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial coherence loss toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.get_formatter()->column_width(38);

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate the loss on a prediction / ground-truth pair and print a JSON report");
  add_input_flags(c_eval, eval.in);
  add_loss_flags(c_eval, eval.loss);
  c_eval->add_option("--loss-map", eval.loss_map, "Write the per-pixel loss map here");
  c_eval->add_option("--attention-map", eval.attention_map, "Write the attention map here");
  c_eval->add_flag("--raw", eval.raw, "Write maps as SCF1 float64 instead of normalized PGM");
  c_eval->add_option("--golden", eval.golden, "Evaluate the inputs embedded in a golden-vector file and verify its outputs");

  CompareOptions compare;
  auto* c_cmp = app.add_subcommand("compare", "Write bce_map.pgm, scloss_map.pgm, attention_map.pgm and compare.json");
  add_input_flags(c_cmp, compare.in);
  add_loss_flags(c_cmp, compare.loss);
  c_cmp->add_option("--out-dir", compare.out_dir, "Output directory")->required();
  c_cmp->add_flag("--raw", compare.raw, "Also write the unnormalized maps as SCF1");

  GradcheckOptions grad;
  auto* c_grad = app.add_subcommand("gradcheck", "Compare the analytic gradient with central differences");
  c_grad->add_option("--seed", grad.seed, "LCG seed");
  c_grad->add_option("--size", grad.size, "Instance size HxW");
  c_grad->add_option("--trials", grad.trials, "Random instances");
  c_grad->add_option("--step", grad.step, "Finite-difference step, in [1e-6, 1e-3]");
  c_grad->add_option("--tol", grad.tol, "Maximum relative error |a-f| / max(|a|, |f|, 1e-8)");
  c_grad->add_option("--fd-scheme", grad.fd_scheme, "central2 (two-point) | central4 (five-point stencil)");
  add_loss_flags(c_grad, grad.loss);

  SimulateOptions simo;
  auto* c_sim = app.add_subcommand("simulate", "Run logit-field descent on a scene and check boundary-first learning");
  c_sim->add_option("--scene", simo.scene, "Scene TOML; omit for the built-in canonical phantom");
  c_sim->add_option("--out-dir", simo.out_dir, "Output directory for snapshots, CSV log and report");
  c_sim->add_option("--steps", simo.steps, "Descent steps");
  c_sim->add_option("--lr", simo.lr, "Learning rate eta");
  c_sim->add_option("--snapshot-every", simo.snapshot_every, "Snapshot interval in steps");
  c_sim->add_option("--seed", simo.seed, "Seed (recorded; the dynamics are deterministic)");
  c_sim->add_option("--baseline", simo.baseline, "scloss | single_response_only");
  c_sim->add_option("--hard-threshold", simo.hard_threshold, "Difficulty at or above which a pixel is hard");
  c_sim->add_option("--learned-mae", simo.learned_mae, "A pixel or region counts as learned once its |p - label| is below this");
  c_sim->add_flag("--strict", simo.strict, "Treat an inconclusive boundary-first check as failure");
  c_sim->add_flag("--no-images", simo.no_images, "Skip snapshot PGMs");
  add_loss_flags(c_sim, simo.loss, true);

  MetricsOptions met;
  auto* c_met = app.add_subcommand("metrics", "Print MAE, adaptive F-measure and max F-measure as JSON");
  add_input_flags(c_met, met.in);
  c_met->add_flag("--curve", met.curve, "Include the 256-point precision/recall curve");

  GoldenOptions gold;
  auto* c_gold = app.add_subcommand("golden", "Write a self-contained golden-vector JSON file");
  c_gold->add_option("--seed", gold.seed, "LCG seed");
  c_gold->add_option("--size", gold.size, "Instance size HxW");
  c_gold->add_option("--out", gold.out, "Output file");
  c_gold->add_option("--all-combinations", gold.all_combinations_dir,
                     "Write one file per {bce,mse,l1} x {gaussian,distance,constant} into this directory");
  c_gold->add_option("--verify", gold.verify, "Recompute a golden file and compare at 1e-12 relative");
  add_loss_flags(c_gold, gold.loss);

  // eval takes either --golden or the --pred/--gt pair.
  for (const char* name : {"--pred", "--gt"}) c_eval->get_option(name)->required(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : input_error;
  }

  try {
    if (c_eval->parsed()) {
      if (eval.golden.empty() && (eval.in.pred.empty() || eval.in.gt.empty())) {
        std::cerr << "eval: --pred and --gt are required unless --golden is given\n";
        return input_error;
      }
      return run_eval(eval, std::cout);
    }
    if (c_cmp->parsed()) return run_compare(compare, std::cout);
    if (c_grad->parsed()) return run_gradcheck(grad, std::cout);
    if (c_sim->parsed()) return run_simulate(simo, std::cout);
    if (c_met->parsed()) return run_metrics(met, std::cout);
    if (c_gold->parsed()) return run_golden(gold, std::cout);
  } catch (const scloss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
  return input_error;
}

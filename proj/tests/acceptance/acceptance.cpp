// Acceptance run: one PASS/FAIL line per criterion, with its measured runtime
// against the budget. Exit status is nonzero if any criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "oracle/naive_loss.hpp"
#include "scloss/grad.hpp"
#include "scloss/kernels.hpp"
#include "scloss/lcg.hpp"
#include "scloss/loss.hpp"
#include "scloss/metrics.hpp"
#include "scloss/sim.hpp"

using namespace scloss;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome closed_form() {
  const GridDims d(8, 8);
  const double total = image_loss(ProbabilityMap(d, 0.5), LabelMap(d, 1), SCLossConfig{}).total;
  const double err = std::abs(total - 0.4802196);
  return {err <= 1e-6, fmt("total=%.10f |err|=%.2e tol=1e-6", total, err)};
}

Outcome gradient_parity() {
  double worst = 0.0;
  std::string worst_combo;
  int failed = 0;
  for (auto sr : {SingleResponse::bce, SingleResponse::mse, SingleResponse::l1}) {
    for (auto reg : {Regularizer::gaussian, Regularizer::distance, Regularizer::constant}) {
      for (int k = 1; k <= 3; ++k) {
        SCLossConfig cfg;
        cfg.with_levels(k);
        cfg.single_response = sr;
        cfg.regularizer = reg;
        const GradReport r = grad_check(1, GridDims(8, 8), cfg, 100, 1e-4, 1e-4, FdScheme::central4);
        failed += !r.pass;
        if (r.max_rel_error >= worst) {
          worst = r.max_rel_error;
          worst_combo = std::string(to_string(sr)) + "/" + std::string(to_string(reg)) + "/K" + std::to_string(k);
        }
      }
    }
  }
  return {failed == 0, fmt("27 combos x 100 trials, 8x8, step 1e-4 (five-point), max rel err %.2e at %s, tol 1e-4", worst,
                           worst_combo.c_str())};
}

Outcome oracle_equivalence() {
  Lcg64 rng(20240601);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    SCLossConfig cfg;
    cfg.with_levels(1 + t % 3);
    cfg.single_response = static_cast<SingleResponse>(t % 3);
    cfg.regularizer = static_cast<Regularizer>((t / 3) % 3);
    std::vector<double> p(256);
    std::vector<int> n(256);
    for (double& v : p) v = rng.uniform();
    for (int& v : n) v = rng.coin() ? 1 : 0;
    const auto lb = image_loss(ProbabilityMap(GridDims(16, 16), p), LabelMap(GridDims(16, 16), n), cfg);
    const auto ref = oracle::naive_loss(16, 16, p, n, cfg);
    worst = std::max(worst, rel(lb.total, ref.total));
    for (std::size_t i = 0; i < 256; ++i) {
      worst = std::max(worst, rel(lb.loss_map[i], ref.loss_map[i]));
      worst = std::max(worst, rel(lb.attention_map[i], ref.attention_map[i]));
    }
  }
  return {worst <= 1e-12, fmt("20 random 16x16 instances, max rel err %.2e, tol 1e-12", worst)};
}

Outcome boundary_emphasis() {
  const int size = 32, side = 10, lo = (size - side) / 2, hi = lo + side - 1;
  const GridDims d(size, size);
  ProbabilityMap pred(d, 0.95);
  for (int r = lo; r <= hi; ++r) {
    for (int c = lo; c <= hi; ++c) pred.at({r, c}) = 0.10;
  }
  const LabelMap labels(d, 1);
  const SCLossConfig cfg;
  const auto lb = image_loss(pred, labels, cfg);
  const FieldMap bce = bce_loss_map(pred, labels, cfg);
  double att_b = 0, att_c = 0, bce_b = 0, bce_c = 0;
  int nb = 0, nc = 0;
  for (int r = lo; r <= hi; ++r) {
    for (int c = lo; c <= hi; ++c) {
      const int depth = std::min({r - lo, hi - r, c - lo, hi - c});
      if (depth == 0) {
        att_b += lb.attention_map.at({r, c});
        bce_b += bce.at({r, c});
        ++nb;
      } else if (depth >= 3) {
        att_c += lb.attention_map.at({r, c});
        bce_c += bce.at({r, c});
        ++nc;
      }
    }
  }
  att_b /= nb, att_c /= nc, bce_b /= nb, bce_c /= nc;
  // Both regions hold p = 0.10: the bce means are equal up to summation rounding.
  return {att_b > att_c && bce_c >= bce_b * (1.0 - 1e-12),
          fmt("attention boundary %.6f > core %.6f; bce core %.6f >= boundary %.6f (rel slack 1e-12; %d/%d px)", att_b,
              att_c, bce_c, bce_b,
              nb, nc)};
}

Outcome boundary_first() {
  const sim::Scene scene = sim::build_scene(sim::canonical_phantom());
  const sim::Trajectory t = sim::run_descent(scene, sim::SimConfig{});
  const sim::BoundaryFirstReport r = sim::assert_boundary_first(t, t.masks);
  std::string mids;
  for (int s : r.mid_steps) mids += (mids.empty() ? "" : ",") + std::to_string(s);
  return {r.verdict == sim::Verdict::holds,
          fmt("verdict %s; mid steps {%s}; min attention ratio %.3f; median learned step boundary %.0f <= core %.0f "
              "(learned: |p-label| < %.2f)",
              std::string(sim::to_string(r.verdict)).c_str(), mids.c_str(), r.min_attention_ratio,
              r.boundary_median_crossing, r.core_median_crossing, r.learned_mae)};
}

Outcome positivity() {
  Lcg64 rng(99);
  int bad = 0;
  double min_margin = INFINITY;
  for (int t = 0; t < 10000; ++t) {
    SCLossConfig cfg;
    cfg.alpha = rng.uniform(0.01, 10.0);
    cfg.regularizer = static_cast<Regularizer>(t % 3);
    const double a = clamp_probability(rng.uniform(), cfg.epsilon);
    const double b = clamp_probability(rng.uniform(), cfg.epsilon);
    const int m = rng.coin();
    const double floor = cfg.regularizer == Regularizer::gaussian ? cfg.alpha * std::exp(-1.0) : cfg.alpha;
    const double den = pair_denominator(a, b, m, cfg);
    const double loss = single_response(static_cast<SingleResponse>(t % 3), a, m) / den;
    if (!(std::isfinite(den) && den >= floor && std::isfinite(loss) && loss >= 0.0)) ++bad;
    min_margin = std::min(min_margin, den - floor);
  }
  for (int t = 0; t < 50; ++t) {
    std::vector<double> p(64);
    std::vector<int> n(64);
    for (double& v : p) v = rng.uniform();
    for (int& v : n) v = rng.coin();
    SCLossConfig cfg;
    cfg.regularizer = static_cast<Regularizer>(t % 3);
    const auto lb = image_loss(ProbabilityMap(GridDims(8, 8), p), LabelMap(GridDims(8, 8), n), cfg);
    for (std::size_t i = 0; i < 64; ++i) {
      if (!(std::isfinite(lb.loss_map[i]) && lb.loss_map[i] >= 0.0 && lb.attention_map[i] > 0.0)) ++bad;
    }
  }
  return {bad == 0, fmt("1e4 pair draws + 50 images, violations %d, min denominator margin %.3e", bad, min_margin)};
}

Outcome monotonicity() {
  const SCLossConfig cfg;
  int violations = 0;
  for (double p_i : {1e-7, 0.1, 0.5, 0.9, 1.0 - 1e-7}) {
    double prev = 0.0;
    for (int s = 1; s <= 1000; ++s) {
      const double w = 1.0 / pair_denominator(p_i, s / 1001.0, 1, cfg);
      violations += !(w > prev);
      prev = w;
    }
  }
  return {violations == 0, fmt("5 centers x 1000-point p_j grid, m=1, violations %d", violations)};
}

Outcome metrics_check() {
  using namespace metrics;
  const ProbabilityMap pred(GridDims(4, 1), std::vector<double>{0.8, 0.6, 0.2, 0.0});
  const LabelMap gt(GridDims(4, 1), std::vector<int>{1, 1, 0, 0});
  const double fa = f_adp(pred, gt), fm = f_max(pred, gt).f_max;
  bool ok = std::abs(fa - 0.8125) < 1e-12 && std::abs(fm - 1.0) < 1e-12;

  Lcg64 rng(5);
  int order_violations = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(100);
    std::vector<int> n(100);
    for (double& v : p) v = rng.uniform();
    for (int& v : n) v = rng.coin();
    const auto r = evaluate(ProbabilityMap(GridDims(10, 10), p), LabelMap(GridDims(10, 10), n));
    order_violations += !(r.f_max >= r.f_adp);
  }
  const GridDims d(6, 6);
  const bool mae_ok = mae(ProbabilityMap(d, 1.0), LabelMap(d, 1)) == 0.0 &&
                      mae(ProbabilityMap(d, 0.5), LabelMap(d, 1)) == 0.5 &&
                      mae(ProbabilityMap(d, 0.0), LabelMap(d, 1)) == 1.0;
  ok = ok && order_violations == 0 && mae_ok;
  return {ok, fmt("f_adp %.6f (0.8125), f_max %.6f (1.0); f_max < f_adp in %d/100 fuzzed; mae identities %s", fa, fm,
                  order_violations, mae_ok ? "exact" : "WRONG")};
}

Outcome determinism(const fs::path& work) {
  std::ostringstream sink;
  cli::GoldenOptions g;
  g.seed = 42;
  g.out = (work / "golden_a.json").string();
  cli::run_golden(g, sink);
  g.out = (work / "golden_b.json").string();
  cli::run_golden(g, sink);
  g.out.clear();
  g.all_combinations_dir = (work / "combos_a").string();
  cli::run_golden(g, sink);
  g.all_combinations_dir = (work / "combos_b").string();
  cli::run_golden(g, sink);

  bool golden_same = slurp(work / "golden_a.json") == slurp(work / "golden_b.json") &&
                     !slurp(work / "golden_a.json").empty();
  int combos = 0;
  for (const auto& e : fs::directory_iterator(work / "combos_a")) {
    ++combos;
    golden_same = golden_same && slurp(e.path()) == slurp(work / "combos_b" / e.path().filename());
  }

  cli::SimulateOptions s;
  s.no_images = true;
  s.out_dir = (work / "sim_a").string();
  const int rc_a = cli::run_simulate(s, sink);
  s.out_dir = (work / "sim_b").string();
  const int rc_b = cli::run_simulate(s, sink);
  const std::string csv = slurp(work / "sim_a" / "trajectory.csv");
  const bool sim_same = rc_a == 0 && rc_b == 0 && !csv.empty() && csv == slurp(work / "sim_b" / "trajectory.csv");
  return {golden_same && combos == 9 && sim_same,
          fmt("golden file + %d combination files byte-identical: %s; simulator CSV (%zu bytes) identical: %s", combos,
              golden_same ? "yes" : "no", csv.size(), sim_same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work_dir = "acceptance_work";
  app.add_option("--work-dir", work_dir, "Scratch directory for generated files");
  CLI11_PARSE(app, argc, argv);
  fs::remove_all(work_dir);
  fs::create_directories(work_dir);

  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"closed-form-loss", 1.0, closed_form},
      {"gradient-parity", 30.0, gradient_parity},
      {"oracle-equivalence", 10.0, oracle_equivalence},
      {"boundary-emphasis", 1.0, boundary_emphasis},
      {"boundary-first-dynamics", 120.0, boundary_first},
      {"positivity-finiteness", 10.0, positivity},
      {"weight-monotonicity", 1.0, monotonicity},
      {"metrics", 5.0, metrics_check},
      {"determinism", 30.0, [&] { return determinism(work_dir); }},
  };

  std::cout << "kernel variant: " << kernels::to_string(kernels::active().isa) << "\n";
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail
              << fmt(" [%.3f s, budget %.0f s%s]", secs, c.budget_s, in_time ? "" : ", OVER BUDGET") << "\n";
  }
  std::cout << (failures ? "acceptance: FAILED (" + std::to_string(failures) + ")" : std::string("acceptance: all passed"))
            << "\n";
  return failures ? 1 : 0;
}

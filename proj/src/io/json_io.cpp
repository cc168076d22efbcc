#include "scloss/io/json_io.hpp"

#include <cmath>

#include "scloss/error.hpp"

namespace scloss::io {

namespace {

using ojson = nlohmann::ordered_json;

// JSON has no infinity; unreached crossings become null.
ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

template <class Parse>
auto enum_field(const nlohmann::json& j, const char* key, Parse parse, decltype(parse("")) fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) fail(ErrorKind::config, std::string("'") + key + "' must be a string");
  const auto v = parse(j[key].get<std::string>());
  if (!v) fail(ErrorKind::config, std::string("unknown ") + key + " '" + j[key].get<std::string>() + "'");
  return v;
}

}  // namespace

ojson to_json(const SCLossConfig& cfg) {
  ojson j;
  j["k_max"] = cfg.k_max;
  j["alpha"] = cfg.alpha;
  j["single_response"] = to_string(cfg.single_response);
  j["regularizer"] = to_string(cfg.regularizer);
  j["epsilon"] = cfg.epsilon;
  j["reduction"] = to_string(cfg.reduction);
  j["level_weights"] = cfg.level_weights;
  j["addon_weight"] = cfg.addon_weight;
  return j;
}

SCLossConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::config, "config must be a JSON object");
  SCLossConfig cfg;
  try {
    if (j.contains("k_max")) cfg.with_levels(j.at("k_max").get<int>());
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("addon_weight")) cfg.addon_weight = j.at("addon_weight").get<double>();
    if (j.contains("level_weights")) cfg.level_weights = j.at("level_weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("bad config field: ") + e.what());
  }
  cfg.single_response = *enum_field(j, "single_response", parse_single_response, cfg.single_response);
  cfg.regularizer = *enum_field(j, "regularizer", parse_regularizer, cfg.regularizer);
  cfg.reduction = *enum_field(j, "reduction", parse_reduction, cfg.reduction);
  cfg.validate();
  return cfg;
}

ojson loss_report(const LossBreakdown& lb, const SCLossConfig& cfg) {
  ojson j;
  j["total"] = lb.total;
  j["per_level_totals"] = lb.per_level_totals;
  j["reduction"] = to_string(cfg.reduction);
  j["config"] = to_json(cfg);
  return j;
}

ojson to_json(const metrics::MetricReport& r, bool with_curve) {
  ojson j;
  j["mae"] = r.mae;
  j["f_adp"] = r.f_adp;
  j["f_max"] = r.f_max;
  j["adaptive_threshold"] = r.adaptive_threshold;
  j["f_max_threshold"] = r.f_max_threshold;
  if (with_curve) {
    ojson curve = ojson::array();
    for (const auto& p : r.pr_curve) curve.push_back({{"threshold", p.threshold}, {"precision", p.precision}, {"recall", p.recall}});
    j["pr_curve"] = std::move(curve);
  }
  return j;
}

ojson to_json(const GradReport& r) {
  ojson j;
  j["pass"] = r.pass;
  j["max_rel_error"] = r.max_rel_error;
  j["max_abs_error"] = r.max_abs_error;
  j["tolerance"] = r.tolerance;
  j["fd_scheme"] = to_string(r.scheme);
  j["trials"] = r.trials;
  j["pixels_checked"] = r.pixels_checked;
  j["pixels_skipped"] = r.pixels_skipped;
  j["worst_trial"] = r.worst_trial;
  j["worst_pixel"] = {r.worst_pixel.row, r.worst_pixel.col};
  return j;
}

ojson to_json(const sim::BoundaryFirstReport& r) {
  ojson j;
  j["verdict"] = sim::to_string(r.verdict);
  j["boundary_first"] = r.verdict == sim::Verdict::holds;
  j["learned_mae"] = r.learned_mae;
  j["mid_steps"] = r.mid_steps;
  j["min_attention_ratio"] = finite_or_null(r.min_attention_ratio);
  j["boundary_median_crossing"] = finite_or_null(r.boundary_median_crossing);
  j["core_median_crossing"] = finite_or_null(r.core_median_crossing);
  j["message"] = r.message;
  return j;
}

}  // namespace scloss::io

#include "scloss/io/golden.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "scloss/error.hpp"
#include "scloss/grad.hpp"
#include "scloss/io/json_io.hpp"
#include "scloss/lcg.hpp"
#include "scloss/loss.hpp"

namespace scloss::io {

namespace {

constexpr const char* kFormat = "scloss-golden-1";

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string real_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += real(v[i]);
  }
  return out + "]";
}

std::string int_array(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string quoted(std::string_view s) { return "\"" + std::string(s) + "\""; }

double rel_err(double expected, double actual) {
  const double scale = std::max({std::abs(expected), std::abs(actual), 1e-300});
  return expected == actual ? 0.0 : std::abs(expected - actual) / scale;
}

template <class T>
std::vector<T> array_of(const nlohmann::json& j, const char* key, std::size_t n) {
  if (!j.contains(key) || !j[key].is_array()) fail(ErrorKind::io, std::string("golden vector: missing array '") + key + "'");
  auto v = j[key].get<std::vector<T>>();
  if (v.size() != n) {
    fail(ErrorKind::io, std::string("golden vector: '") + key + "' has " + std::to_string(v.size()) + " entries, expected " +
                            std::to_string(n));
  }
  return v;
}

}  // namespace

GoldenVector make_golden(std::uint64_t seed, GridDims dims, const SCLossConfig& cfg) {
  cfg.validate();
  GoldenVector g;
  g.seed = seed;
  g.dims = dims;
  g.config = cfg;
  Lcg64 rng(seed);
  g.pred.resize(dims.size());
  g.labels.resize(dims.size());
  for (auto& p : g.pred) p = rng.uniform();
  for (auto& n : g.labels) n = rng.uniform() < 0.5 ? 1 : 0;

  const ProbabilityMap pred(dims, g.pred);
  const LabelMap labels(dims, g.labels);
  const LossBreakdown lb = image_loss(pred, labels, cfg);
  g.total = lb.total;
  g.per_level_totals = lb.per_level_totals;
  g.loss_map = lb.loss_map.vector();
  g.attention_map = lb.attention_map.vector();
  g.gradient = grad_wrt_probs(pred, labels, cfg).vector();
  return g;
}

std::string golden_to_json(const GoldenVector& g) {
  const SCLossConfig& c = g.config;
  std::string s = "{\n";
  s += "  \"format\": " + quoted(kFormat) + ",\n";
  s += "  \"seed\": " + std::to_string(g.seed) + ",\n";
  s += "  \"dims\": {\"height\": " + std::to_string(g.dims.height) + ", \"width\": " + std::to_string(g.dims.width) + "},\n";
  s += "  \"config\": {\"k_max\": " + std::to_string(c.k_max) + ", \"alpha\": " + real(c.alpha) +
       ", \"single_response\": " + quoted(to_string(c.single_response)) + ", \"regularizer\": " +
       quoted(to_string(c.regularizer)) + ", \"epsilon\": " + real(c.epsilon) + ", \"reduction\": " +
       quoted(to_string(c.reduction)) + ", \"level_weights\": " + real_array(c.level_weights) +
       ", \"addon_weight\": " + real(c.addon_weight) + "},\n";
  s += "  \"generator\": {\"kind\": \"lcg64\", \"multiplier\": 6364136223846793005, \"increment\": 1442695040888963407, "
       "\"uniform\": \"(state >> 11) * 2^-53 after each step\", \"order\": \"pred row-major, then labels row-major "
       "as uniform < 0.5\"},\n";
  s += "  \"pred\": " + real_array(g.pred) + ",\n";
  s += "  \"labels\": " + int_array(g.labels) + ",\n";
  s += "  \"expected\": {\n";
  s += "    \"total\": " + real(g.total) + ",\n";
  s += "    \"per_level_totals\": " + real_array(g.per_level_totals) + ",\n";
  s += "    \"loss_map\": " + real_array(g.loss_map) + ",\n";
  s += "    \"attention_map\": " + real_array(g.attention_map) + ",\n";
  s += "    \"gradient\": " + real_array(g.gradient) + "\n";
  s += "  }\n}\n";
  return s;
}

GoldenVector golden_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::io, std::string("golden vector: ") + e.what());
  }
  if (j.value("format", "") != kFormat) fail(ErrorKind::io, "golden vector: unknown format tag");
  GoldenVector g;
  try {
    g.seed = j.at("seed").get<std::uint64_t>();
    g.dims = GridDims(j.at("dims").at("height").get<int>(), j.at("dims").at("width").get<int>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("golden vector: ") + e.what());
  }
  g.config = config_from_json(j.at("config"));
  const std::size_t n = g.dims.size();
  g.pred = array_of<double>(j, "pred", n);
  g.labels = array_of<int>(j, "labels", n);
  const auto& e = j.at("expected");
  g.total = e.at("total").get<double>();
  g.per_level_totals = array_of<double>(e, "per_level_totals", static_cast<std::size_t>(g.config.k_max));
  g.loss_map = array_of<double>(e, "loss_map", n);
  g.attention_map = array_of<double>(e, "attention_map", n);
  g.gradient = array_of<double>(e, "gradient", n);
  return g;
}

void write_golden(const std::filesystem::path& path, const GoldenVector& g) {
  const std::string text = golden_to_json(g);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, path.string() + ": cannot open for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) fail(ErrorKind::io, path.string() + ": write failed");
}

GoldenVector read_golden(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, path.string() + ": cannot open for reading");
  return golden_from_json({std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()});
}

GoldenCheck verify_golden(const GoldenVector& g, double tolerance) {
  const ProbabilityMap pred(g.dims, g.pred);
  const LabelMap labels(g.dims, g.labels);
  const LossBreakdown lb = image_loss(pred, labels, g.config);
  const FieldMap grad = grad_wrt_probs(pred, labels, g.config);

  GoldenCheck out;
  out.tolerance = tolerance;
  auto track = [&](const char* field, double expected, double actual) {
    const double e = rel_err(expected, actual);
    if (e > out.max_rel_error || out.worst_field.empty()) {
      out.max_rel_error = std::max(out.max_rel_error, e);
      out.worst_field = field;
    }
  };
  track("total", g.total, lb.total);
  for (std::size_t k = 0; k < g.per_level_totals.size(); ++k) track("per_level_totals", g.per_level_totals[k], lb.per_level_totals[k]);
  for (std::size_t i = 0; i < g.pred.size(); ++i) {
    track("loss_map", g.loss_map[i], lb.loss_map[i]);
    track("attention_map", g.attention_map[i], lb.attention_map[i]);
    track("gradient", g.gradient[i], grad[i]);
  }
  out.pass = out.max_rel_error <= tolerance;
  return out;
}

}  // namespace scloss::io

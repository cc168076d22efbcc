#include "scloss/io/toml_io.hpp"

#include <toml.hpp>

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "scloss/error.hpp"

namespace scloss::io {

namespace {

std::string read_text(const std::filesystem::path& path, ErrorKind kind) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(kind, path.string() + ": cannot open for reading");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

toml::table parse_or_fail(std::string_view text, std::string_view source, ErrorKind kind) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    fail(kind, msg.str());
  }
}

void reject_unknown(const toml::table& t, const std::set<std::string_view>& known, std::string_view where, ErrorKind kind) {
  for (const auto& [key, _] : t) {
    if (!known.contains(key.str())) fail(kind, std::string(where) + ": unknown key '" + std::string(key.str()) + "'");
  }
}

// Accepts integers where a float is expected.
double number(const toml::node& n, std::string_view key, std::string_view where, ErrorKind kind) {
  if (auto v = n.value<double>()) return *v;
  fail(kind, std::string(where) + ": '" + std::string(key) + "' must be a number");
}

std::int64_t integer(const toml::node& n, std::string_view key, std::string_view where, ErrorKind kind) {
  if (n.is_integer()) return *n.value<std::int64_t>();
  fail(kind, std::string(where) + ": '" + std::string(key) + "' must be an integer");
}

std::string text(const toml::node& n, std::string_view key, std::string_view where, ErrorKind kind) {
  if (auto v = n.value<std::string>()) return *v;
  fail(kind, std::string(where) + ": '" + std::string(key) + "' must be a string");
}

SCLossConfig config_from_table(const toml::table& t, std::string_view where) {
  constexpr ErrorKind kind = ErrorKind::config;
  reject_unknown(t,
                 {"k_max", "alpha", "single_response", "regularizer", "epsilon", "reduction", "level_weights",
                  "addon_weight"},
                 where, kind);
  SCLossConfig cfg;
  if (const auto* n = t.get("k_max")) {
    const auto k = integer(*n, "k_max", where, kind);
    if (k < 1 || k > 64) fail(kind, std::string(where) + ": k_max must lie in 1..64");
    cfg.with_levels(static_cast<int>(k));
  }
  if (const auto* n = t.get("alpha")) cfg.alpha = number(*n, "alpha", where, kind);
  if (const auto* n = t.get("epsilon")) cfg.epsilon = number(*n, "epsilon", where, kind);
  if (const auto* n = t.get("addon_weight")) cfg.addon_weight = number(*n, "addon_weight", where, kind);
  if (const auto* n = t.get("single_response")) {
    const std::string s = text(*n, "single_response", where, kind);
    const auto v = parse_single_response(s);
    if (!v) fail(kind, std::string(where) + ": unknown single_response '" + s + "'");
    cfg.single_response = *v;
  }
  if (const auto* n = t.get("regularizer")) {
    const std::string s = text(*n, "regularizer", where, kind);
    const auto v = parse_regularizer(s);
    if (!v) fail(kind, std::string(where) + ": unknown regularizer '" + s + "'");
    cfg.regularizer = *v;
  }
  if (const auto* n = t.get("reduction")) {
    const std::string s = text(*n, "reduction", where, kind);
    const auto v = parse_reduction(s);
    if (!v) fail(kind, std::string(where) + ": unknown reduction '" + s + "'");
    cfg.reduction = *v;
  }
  if (const auto* n = t.get("level_weights")) {
    const auto* arr = n->as_array();
    if (!arr) fail(kind, std::string(where) + ": 'level_weights' must be an array");
    cfg.level_weights.clear();
    for (const auto& w : *arr) cfg.level_weights.push_back(number(w, "level_weights", where, kind));
    if (!t.contains("k_max")) cfg.k_max = static_cast<int>(cfg.level_weights.size());
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    fail(kind, std::string(where) + ": " + e.what());
  }
  return cfg;
}

sim::Shape shape_from_table(const toml::table& t, std::string_view where) {
  constexpr ErrorKind kind = ErrorKind::io;
  const auto* kind_node = t.get("kind");
  if (!kind_node) fail(kind, std::string(where) + ": missing 'kind'");
  const std::string shape_kind = text(*kind_node, "kind", where, kind);

  auto need = [&](std::string_view key) -> const toml::node& {
    const auto* n = t.get(key);
    if (!n) fail(kind, std::string(where) + ": " + shape_kind + " needs '" + std::string(key) + "'");
    return *n;
  };
  auto num = [&](std::string_view key) { return number(need(key), key, where, kind); };
  auto whole = [&](std::string_view key) { return static_cast<int>(integer(need(key), key, where, kind)); };

  sim::Shape s;
  if (shape_kind == "disk") {
    reject_unknown(t, {"kind", "cx", "cy", "r", "label", "difficulty"}, where, kind);
    s.geometry = sim::Disk{num("cx"), num("cy"), num("r")};
  } else if (shape_kind == "rect") {
    reject_unknown(t, {"kind", "x0", "y0", "x1", "y1", "label", "difficulty"}, where, kind);
    s.geometry = sim::Rect{whole("x0"), whole("y0"), whole("x1"), whole("y1")};
  } else if (shape_kind == "ring") {
    reject_unknown(t, {"kind", "cx", "cy", "r_in", "r_out", "label", "difficulty"}, where, kind);
    s.geometry = sim::Ring{num("cx"), num("cy"), num("r_in"), num("r_out")};
  } else {
    fail(kind, std::string(where) + ": unknown shape kind '" + shape_kind + "'");
  }
  if (const auto* n = t.get("label")) s.label = static_cast<int>(integer(*n, "label", where, kind));
  if (const auto* n = t.get("difficulty")) s.difficulty = number(*n, "difficulty", where, kind);
  return s;
}

}  // namespace

SCLossConfig parse_config_toml(std::string_view text, std::string_view source) {
  const toml::table root = parse_or_fail(text, source, ErrorKind::config);
  // Accept either top-level keys or a [loss] table.
  if (const auto* loss = root.get_as<toml::table>("loss"); loss && root.size() == 1) {
    return config_from_table(*loss, std::string(source) + " [loss]");
  }
  return config_from_table(root, source);
}

SCLossConfig load_config(const std::filesystem::path& path) {
  return parse_config_toml(read_text(path, ErrorKind::io), path.string());
}

sim::SceneSpec parse_scene_toml(std::string_view text, std::string_view source) {
  constexpr ErrorKind kind = ErrorKind::io;
  const toml::table root = parse_or_fail(text, source, kind);
  reject_unknown(root, {"scene", "shape"}, source, kind);
  const auto* scene = root.get_as<toml::table>("scene");
  if (!scene) fail(kind, std::string(source) + ": missing [scene] table");
  const std::string where = std::string(source) + " [scene]";
  reject_unknown(*scene, {"width", "height"}, where, kind);
  const auto* w = scene->get("width");
  const auto* h = scene->get("height");
  if (!w || !h) fail(kind, where + ": needs 'width' and 'height'");
  const auto width = integer(*w, "width", where, kind);
  const auto height = integer(*h, "height", where, kind);
  if (width < 1 || height < 1 || width > 8192 || height > 8192) fail(kind, where + ": size must lie in 1..8192");

  sim::SceneSpec spec;
  spec.dims = GridDims(static_cast<int>(height), static_cast<int>(width));
  if (const auto* shapes = root.get("shape")) {
    const auto* arr = shapes->as_array();
    if (!arr) fail(kind, std::string(source) + ": 'shape' must be an array of tables ([[shape]])");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* t = (*arr)[i].as_table();
      const std::string at = std::string(source) + " shape " + std::to_string(i);
      if (!t) fail(kind, at + ": must be a table");
      spec.shapes.push_back(shape_from_table(*t, at));
    }
  }
  return spec;
}

sim::SceneSpec load_scene(const std::filesystem::path& path) {
  return parse_scene_toml(read_text(path, ErrorKind::io), path.string());
}

}  // namespace scloss::io

#pragma once

#include <filesystem>
#include <string_view>

#include "scloss/config.hpp"
#include "scloss/sim.hpp"

namespace scloss::io {

/// Keys mirror SCLossConfig field names; all optional. When k_max is given
/// without level_weights the halving defaults are used. Errors are
/// ErrorKind::config.
SCLossConfig parse_config_toml(std::string_view text, std::string_view source = "config");
SCLossConfig load_config(const std::filesystem::path& path);

/// [scene] width/height, then [[shape]] tables with kind = "disk" | "rect" |
/// "ring". Errors are ErrorKind::io (parse) or invalid_argument (geometry).
sim::SceneSpec parse_scene_toml(std::string_view text, std::string_view source = "scene");
sim::SceneSpec load_scene(const std::filesystem::path& path);

}  // namespace scloss::io

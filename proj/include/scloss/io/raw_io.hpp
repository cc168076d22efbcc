#pragma once

// SCF1 raw float maps: "SCF1", u32 LE height, u32 LE width, 4 zero bytes,
// then height*width little-endian float64 values in row-major order.

#include <filesystem>
#include <string>

#include "scloss/grid.hpp"

namespace scloss::io {

std::string encode_scf(const FieldMap& field);
FieldMap decode_scf(const std::string& bytes);

void write_scf(const std::filesystem::path& path, const FieldMap& field);
FieldMap read_scf(const std::filesystem::path& path);

/// True when the file starts with the SCF1 magic.
bool is_scf(const std::filesystem::path& path);

}  // namespace scloss::io

#pragma once

// Grayscale PGM (P5/P2) and PNG images, 8 or 16 bit.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "scloss/grid.hpp"

namespace scloss::io {

struct GrayImage {
  GridDims dims;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major
};

/// Picks the decoder from the file signature, not the extension.
GrayImage read_image(const std::filesystem::path& path);

GrayImage read_pgm(const std::filesystem::path& path);
GrayImage read_png(const std::filesystem::path& path);

/// 8-bit binary PGM (P5) or, when maxval > 255, 16-bit big-endian P5.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);

/// v / maxval
ProbabilityMap to_probability(const GrayImage& img);

/// Without a threshold every pixel must be exactly 0 or maxval. With one,
/// a pixel is foreground iff v / maxval > threshold.
LabelMap to_labels(const GrayImage& img, std::optional<double> soft_threshold = std::nullopt);

/// round(clamp(v, 0, 1) * 255)
GrayImage from_unit_field(const FieldMap& field);

struct Normalized {
  GrayImage image;
  double min = 0.0;
  double max = 0.0;
};

/// Min-max normalization to 0..255; a flat field maps to 0.
Normalized normalize_u8(const FieldMap& field);

/// Same, with a caller-chosen range (values are clamped into it).
GrayImage normalize_u8(const FieldMap& field, double lo, double hi);

}  // namespace scloss::io

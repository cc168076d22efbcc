#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scloss {

struct PixelPos {
  int row = 0;
  int col = 0;

  auto operator<=>(const PixelPos&) const = default;
};

struct GridDims {
  int height = 1;
  int width = 1;

  GridDims() = default;
  GridDims(int h, int w);

  std::size_t size() const noexcept { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  bool contains(PixelPos p) const noexcept { return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width; }
  std::size_t index(PixelPos p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.col);
  }
  PixelPos pos(std::size_t idx) const noexcept {
    return {static_cast<int>(idx / static_cast<std::size_t>(width)), static_cast<int>(idx % static_cast<std::size_t>(width))};
  }
  std::string to_string() const;  // "HxW"

  bool operator==(const GridDims&) const = default;
};

// Row-major H x W grid of values.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(GridDims dims, T fill = T{}) : dims_(dims), values_(dims.size(), fill) {}
  Grid(GridDims dims, std::vector<T> values);

  const GridDims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }

  const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& at(PixelPos p) const;
  T& at(PixelPos p);

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }
  const std::vector<T>& vector() const noexcept { return values_; }

  bool operator==(const Grid&) const = default;

 private:
  GridDims dims_{};
  std::vector<T> values_;
};

// Real-valued per-pixel field: loss maps, attention maps, gradients, logits.
using FieldMap = Grid<double>;

// Integer labels: {0,1} for binary maps, class indices for multi-class maps.
using LabelMap = Grid<int>;

// Per-pixel probabilities, validated to lie in [0,1] on construction.
class ProbabilityMap : public Grid<double> {
 public:
  ProbabilityMap() = default;
  explicit ProbabilityMap(GridDims dims, double fill = 0.5);
  ProbabilityMap(GridDims dims, std::vector<double> values);
};

// Per-pixel class-probability vectors, stored pixel-major (C values per pixel).
class ClassProbabilityMap {
 public:
  ClassProbabilityMap(GridDims dims, int classes, std::vector<double> values);

  const GridDims& dims() const noexcept { return dims_; }
  int classes() const noexcept { return classes_; }
  double prob(std::size_t pixel, int cls) const noexcept {
    return values_[pixel * static_cast<std::size_t>(classes_) + static_cast<std::size_t>(cls)];
  }

 private:
  GridDims dims_;
  int classes_;
  std::vector<double> values_;
};

// Binary label map check: every value is 0 or 1.
void require_binary(const LabelMap& labels, const char* what);
void require_same_dims(const GridDims& a, const GridDims& b, const char* what);

// Projects every value into [epsilon, 1 - epsilon]; interior values are unchanged.
ProbabilityMap clamp_probabilities(const ProbabilityMap& map, double epsilon);
double clamp_probability(double p, double epsilon) noexcept;

// In-bounds pixels at Chebyshev distance exactly k from pos, in row-major order.
std::vector<PixelPos> ring_neighbors(PixelPos pos, int k, GridDims dims);

// |ring_neighbors(pos, k, dims)| without materializing the ring.
int ring_count(PixelPos pos, int k, GridDims dims) noexcept;

// Relative offsets (drow, dcol) of the full level-k ring, row-major.
std::vector<PixelPos> ring_offsets(int k);

}  // namespace scloss

#include "scloss/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "scloss/error.hpp"

namespace scloss {

GridDims::GridDims(int h, int w) : height(h), width(w) {
  if (h < 1 || w < 1) {
    fail(ErrorKind::invalid_argument, "grid dimensions must be positive, got " + std::to_string(h) + "x" + std::to_string(w));
  }
}

std::string GridDims::to_string() const { return std::to_string(height) + "x" + std::to_string(width); }

template <class T>
Grid<T>::Grid(GridDims dims, std::vector<T> values) : dims_(dims), values_(std::move(values)) {
  if (values_.size() != dims_.size()) {
    fail(ErrorKind::dimension_mismatch, "grid " + dims_.to_string() + " expects " + std::to_string(dims_.size()) +
                                            " values, got " + std::to_string(values_.size()));
  }
}

template <class T>
const T& Grid<T>::at(PixelPos p) const {
  if (!dims_.contains(p)) {
    fail(ErrorKind::invalid_argument, "pixel (" + std::to_string(p.row) + "," + std::to_string(p.col) + ") outside " + dims_.to_string());
  }
  return values_[dims_.index(p)];
}

template <class T>
T& Grid<T>::at(PixelPos p) {
  return const_cast<T&>(std::as_const(*this).at(p));
}

template class Grid<double>;
template class Grid<int>;

namespace {

void check_probabilities(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorKind::invalid_argument, "probability at index " + std::to_string(i) + " is outside [0,1]: " + std::to_string(v));
    }
  }
}

}  // namespace

ProbabilityMap::ProbabilityMap(GridDims dims, double fill) : Grid<double>(dims, fill) { check_probabilities(values()); }

ProbabilityMap::ProbabilityMap(GridDims dims, std::vector<double> values) : Grid<double>(dims, std::move(values)) {
  check_probabilities(this->values());
}

ClassProbabilityMap::ClassProbabilityMap(GridDims dims, int classes, std::vector<double> values)
    : dims_(dims), classes_(classes), values_(std::move(values)) {
  if (classes_ < 2) fail(ErrorKind::invalid_argument, "class-probability map needs at least 2 classes");
  if (values_.size() != dims_.size() * static_cast<std::size_t>(classes_)) {
    fail(ErrorKind::dimension_mismatch, "class-probability map " + dims_.to_string() + "x" + std::to_string(classes_) +
                                            " got " + std::to_string(values_.size()) + " values");
  }
  for (std::size_t px = 0; px < dims_.size(); ++px) {
    double total = 0.0;
    for (int c = 0; c < classes_; ++c) {
      const double v = prob(px, c);
      if (!(v >= 0.0 && v <= 1.0)) fail(ErrorKind::invalid_argument, "class probability outside [0,1] at pixel " + std::to_string(px));
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      fail(ErrorKind::invalid_argument, "class vector at pixel " + std::to_string(px) + " sums to " + std::to_string(total));
    }
  }
}

void require_binary(const LabelMap& labels, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      fail(ErrorKind::invalid_argument, std::string(what) + ": label " + std::to_string(labels[i]) + " at index " +
                                            std::to_string(i) + " is not binary");
    }
  }
}

void require_same_dims(const GridDims& a, const GridDims& b, const char* what) {
  if (!(a == b)) {
    fail(ErrorKind::dimension_mismatch, std::string(what) + ": size mismatch " + a.to_string() + " vs " + b.to_string());
  }
}

double clamp_probability(double p, double epsilon) noexcept { return std::clamp(p, epsilon, 1.0 - epsilon); }

ProbabilityMap clamp_probabilities(const ProbabilityMap& map, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    fail(ErrorKind::invalid_argument, "clamp epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));
  }
  std::vector<double> out(map.values().begin(), map.values().end());
  for (double& v : out) v = clamp_probability(v, epsilon);
  return ProbabilityMap(map.dims(), std::move(out));
}

std::vector<PixelPos> ring_offsets(int k) {
  if (k < 1) fail(ErrorKind::invalid_argument, "adjacency level must be >= 1, got " + std::to_string(k));
  std::vector<PixelPos> out;
  out.reserve(static_cast<std::size_t>(8 * k));
  for (int dr = -k; dr <= k; ++dr) {
    if (dr == -k || dr == k) {
      for (int dc = -k; dc <= k; ++dc) out.push_back({dr, dc});
    } else {
      out.push_back({dr, -k});
      out.push_back({dr, k});
    }
  }
  return out;
}

std::vector<PixelPos> ring_neighbors(PixelPos pos, int k, GridDims dims) {
  if (!dims.contains(pos)) {
    fail(ErrorKind::invalid_argument, "pixel (" + std::to_string(pos.row) + "," + std::to_string(pos.col) + ") outside " + dims.to_string());
  }
  std::vector<PixelPos> out;
  for (const PixelPos off : ring_offsets(k)) {
    const PixelPos q{pos.row + off.row, pos.col + off.col};
    if (dims.contains(q)) out.push_back(q);
  }
  return out;
}

namespace {

int span_in_bounds(int center, int radius, int extent) noexcept {
  return std::min(center + radius, extent - 1) - std::max(center - radius, 0) + 1;
}

}  // namespace

int ring_count(PixelPos pos, int k, GridDims dims) noexcept {
  const int outer = span_in_bounds(pos.row, k, dims.height) * span_in_bounds(pos.col, k, dims.width);
  const int inner = span_in_bounds(pos.row, k - 1, dims.height) * span_in_bounds(pos.col, k - 1, dims.width);
  return outer - inner;
}

}  // namespace scloss

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "scloss/grid.hpp"
#include "scloss/lcg.hpp"

namespace testing {

struct Instance {
  scloss::ProbabilityMap pred;
  scloss::LabelMap labels;
};

inline Instance random_instance(scloss::Lcg64& rng, scloss::GridDims dims, double lo = 0.0, double hi = 1.0) {
  std::vector<double> p(dims.size());
  std::vector<int> n(dims.size());
  for (double& v : p) v = rng.uniform(lo, hi);
  for (int& v : n) v = rng.coin() ? 1 : 0;
  return {scloss::ProbabilityMap(dims, std::move(p)), scloss::LabelMap(dims, std::move(n))};
}

inline double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

template <class T>
scloss::Grid<T> transform(const scloss::Grid<T>& g, int op) {
  // 0: horizontal flip, 1: vertical flip, 2: rotate 90 degrees clockwise
  const scloss::GridDims d = g.dims();
  const scloss::GridDims out_dims = op == 2 ? scloss::GridDims(d.width, d.height) : d;
  scloss::Grid<T> out(out_dims);
  for (int r = 0; r < d.height; ++r) {
    for (int c = 0; c < d.width; ++c) {
      scloss::PixelPos to{};
      if (op == 0) to = {r, d.width - 1 - c};
      if (op == 1) to = {d.height - 1 - r, c};
      if (op == 2) to = {c, d.height - 1 - r};
      out.at(to) = g.at({r, c});
    }
  }
  return out;
}

inline scloss::ProbabilityMap transform(const scloss::ProbabilityMap& g, int op) {
  const scloss::FieldMap f = transform(static_cast<const scloss::FieldMap&>(g), op);
  return scloss::ProbabilityMap(f.dims(), f.vector());
}

}  // namespace testing

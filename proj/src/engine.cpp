#include "engine.hpp"

#include <algorithm>

#include "scloss/error.hpp"
#include "scloss/kernels.hpp"

namespace scloss::detail {

namespace {

// One offset per unordered pair: the half of the ring that is later in
// row-major order. The denominator is symmetric, so each pair is evaluated once
// and credited to both pixels.
std::vector<PixelPos> half_ring(int k) {
  std::vector<PixelPos> out;
  for (const PixelPos off : ring_offsets(k)) {
    if (off.row > 0 || (off.row == 0 && off.col > 0)) out.push_back(off);
  }
  return out;
}

// Calls fn(i0, j0, len) for every row segment of pairs (i, i + off) that lies
// inside the grid. Pairs within a segment are contiguous in memory.
template <class Fn>
void for_each_segment(GridDims dims, PixelPos off, Fn&& fn) {
  const int c0 = std::max(0, -off.col);
  const int c1 = std::min(dims.width, dims.width - off.col);
  if (c1 <= c0) return;
  const auto len = static_cast<std::size_t>(c1 - c0);
  for (int r = 0; r + off.row < dims.height; ++r) {
    fn(dims.index({r, c0}), dims.index({r + off.row, c0 + off.col}), len);
  }
}

kernels::PairParams pair_params(const Prepared& in, const SCLossConfig& cfg) {
  return {cfg.alpha, cfg.regularizer, in.rule};
}

}  // namespace

double reduction_scale(const SCLossConfig& cfg, std::size_t pixels) {
  return cfg.reduction == Reduction::mean ? 1.0 / static_cast<double>(pixels) : 1.0;
}

Prepared prepare_binary(const ProbabilityMap& pred, const LabelMap& labels, const SCLossConfig& cfg) {
  cfg.validate();
  require_same_dims(pred.dims(), labels.dims(), "prediction/label");
  require_binary(labels, "labels");
  Prepared in;
  in.dims = pred.dims();
  in.p.resize(pred.size());
  in.codes.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    in.p[i] = clamp_probability(pred[i], cfg.epsilon);
    in.codes[i] = static_cast<double>(labels[i]);
  }
  in.single = in.codes;
  in.rule = PairRule::product;
  in.kind = cfg.single_response;  // cross_entropy on a binary map is bce
  return in;
}

std::vector<std::vector<double>> ring_counts(GridDims dims, int k_max) {
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(k_max), std::vector<double>(dims.size()));
  for (int k = 1; k <= k_max; ++k) {
    auto& level = counts[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const PixelPos pos = dims.pos(i);
      const int n = ring_count(pos, k, dims);
      if (n == 0) {
        fail(ErrorKind::degenerate_geometry, "pixel (" + std::to_string(pos.row) + "," + std::to_string(pos.col) +
                                                 ") has no level-" + std::to_string(k) + " neighbors in a " +
                                                 dims.to_string() + " image");
      }
      level[i] = static_cast<double>(n);
    }
  }
  return counts;
}

LossBreakdown forward(const Prepared& in, const SCLossConfig& cfg) {
  const auto& kt = kernels::active();
  const std::size_t n = in.dims.size();
  const auto counts = ring_counts(in.dims, cfg.k_max);
  const kernels::PairParams prm = pair_params(in, cfg);

  std::vector<double> single(n);
  kt.single_response(in.p.data(), in.single.data(), n, in.kind, single.data(), nullptr);

  LossBreakdown out;
  out.loss_map = FieldMap(in.dims, 0.0);
  out.attention_map = FieldMap(in.dims, 0.0);
  out.per_level_totals.assign(static_cast<std::size_t>(cfg.k_max), 0.0);
  const double scale = reduction_scale(cfg, n);

  std::vector<double> acc(n);
  std::vector<double> tmp(static_cast<std::size_t>(in.dims.width));
  for (int k = 1; k <= cfg.k_max; ++k) {
    const double w = cfg.level_weights[static_cast<std::size_t>(k - 1)];
    if (w == 0.0) continue;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const PixelPos off : half_ring(k)) {
      for_each_segment(in.dims, off, [&](std::size_t i0, std::size_t j0, std::size_t len) {
        kt.pair_inv_denominator(&in.p[i0], &in.p[j0], &in.codes[i0], &in.codes[j0], len, prm, tmp.data());
        for (std::size_t x = 0; x < len; ++x) acc[i0 + x] += tmp[x];
        for (std::size_t x = 0; x < len; ++x) acc[j0 + x] += tmp[x];
      });
    }
    const auto& count = counts[static_cast<std::size_t>(k - 1)];
    double level_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double weight = acc[i] / count[i];
      const double level_loss = w * (single[i] * weight);
      out.attention_map[i] += w * weight;
      out.loss_map[i] += level_loss;
      level_sum += level_loss;
    }
    out.per_level_totals[static_cast<std::size_t>(k - 1)] = level_sum * scale;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += out.loss_map[i];
  out.total = total * scale;
  return out;
}

std::vector<double> gradient(const Prepared& in, const SCLossConfig& cfg) {
  const auto& kt = kernels::active();
  const std::size_t n = in.dims.size();
  const auto counts = ring_counts(in.dims, cfg.k_max);
  const kernels::PairParams prm = pair_params(in, cfg);

  std::vector<double> single(n), single_deriv(n);
  kt.single_response(in.p.data(), in.single.data(), n, in.kind, single.data(), single_deriv.data());

  const double scale = reduction_scale(cfg, n);
  std::vector<double> grad(n, 0.0);
  std::vector<double> a(n), b(n);
  const std::size_t width = static_cast<std::size_t>(in.dims.width);
  std::vector<double> gi(width), gj(width);

  for (int k = 1; k <= cfg.k_max; ++k) {
    const double w = cfg.level_weights[static_cast<std::size_t>(k - 1)];
    if (w == 0.0) continue;
    const auto& count = counts[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < n; ++i) {
      const double c = w * scale / count[i];
      a[i] = c * single[i];
      b[i] = c * single_deriv[i];
    }
    for (const PixelPos off : half_ring(k)) {
      for_each_segment(in.dims, off, [&](std::size_t i0, std::size_t j0, std::size_t len) {
        kernels::PairGradientArgs args{&in.p[i0], &in.p[j0], &in.codes[i0], &in.codes[j0], &a[i0], &a[j0],
                                       &b[i0],    &b[j0],    gi.data(),      gj.data(),      len};
        kt.pair_gradient(args, prm);
        for (std::size_t x = 0; x < len; ++x) grad[i0 + x] += gi[x];
        for (std::size_t x = 0; x < len; ++x) grad[j0 + x] += gj[x];
      });
    }
  }
  return grad;
}

}  // namespace scloss::detail

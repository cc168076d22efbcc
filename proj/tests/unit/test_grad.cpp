#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "scloss/error.hpp"
#include "scloss/grad.hpp"
#include "scloss/lcg.hpp"
#include "scloss/loss.hpp"

using namespace scloss;

namespace {

double max_rel(const FieldMap& a, const FieldMap& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_error(a[i], b[i]));
  return worst;
}

}  // namespace

TEST_SUITE("grad") {
  TEST_CASE("uniform input: equal, negative interior gradients") {
    // A pixel's gradient sees ring sizes up to 2K away, so "interior" starts at 2K.
    const GridDims d(13, 13);
    const FieldMap g = grad_wrt_probs(ProbabilityMap(d, 0.5), LabelMap(d, 1), SCLossConfig{});
    const double ref = g.at({6, 6});
    CHECK(ref < 0.0);
    for (int r = 4; r < 9; ++r) {
      for (int c = 4; c < 9; ++c) CHECK(g.at({r, c}) == doctest::Approx(ref).epsilon(1e-13));
    }
    for (double v : g.values()) CHECK(v < 0.0);
  }

  TEST_CASE("finite differences agree on the uniform case by symmetry") {
    const GridDims d(11, 11);
    const auto fd = finite_diff_grad(ProbabilityMap(d, 0.5), LabelMap(d, 1), SCLossConfig{});
    CHECK(fd.clamp_hits.empty());
    CHECK(fd.gradient.at({5, 5}) == doctest::Approx(fd.gradient.at({4, 6})).epsilon(1e-7));
  }

  TEST_CASE("perfect prediction has vanishing gradient") {
    Lcg64 rng(4);
    const auto inst = testing::random_instance(rng, GridDims(8, 8));
    std::vector<double> p(inst.labels.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = inst.labels[i];
    const FieldMap g = grad_wrt_probs(ProbabilityMap(inst.labels.dims(), p), inst.labels, SCLossConfig{});
    for (double v : g.values()) CHECK(std::abs(v) < 1e-4);
  }

  TEST_CASE("seeded random case matches two-point differences") {
    Lcg64 rng(1);
    const auto inst = testing::random_instance(rng, GridDims(8, 8), 0.05, 0.95);
    const SCLossConfig cfg;
    const FieldMap a = grad_wrt_probs(inst.pred, inst.labels, cfg);
    const auto fd = finite_diff_grad(inst.pred, inst.labels, cfg, 1e-4, FdScheme::central2);
    CHECK(max_rel(a, fd.gradient) < 1e-4);
    const auto fd4 = finite_diff_grad(inst.pred, inst.labels, cfg, 1e-4, FdScheme::central4);
    CHECK(max_rel(a, fd4.gradient) < 1e-6);
  }

  TEST_CASE("quadratic toy is exact under central differences") {
    SCLossConfig cfg;
    cfg.with_levels(1);
    cfg.single_response = SingleResponse::mse;
    cfg.regularizer = Regularizer::constant;
    const ProbabilityMap pred(GridDims(1, 2), std::vector<double>{0.3, 0.6});
    const LabelMap labels(GridDims(1, 2), std::vector<int>{1, 0});
    const FieldMap a = grad_wrt_probs(pred, labels, cfg);
    const auto fd = finite_diff_grad(pred, labels, cfg);
    CHECK(max_rel(a, fd.gradient) < 1e-7);
  }

  TEST_CASE("clamp hits are reported and clamped pixels get zero") {
    const ProbabilityMap pred(GridDims(3, 3), std::vector<double>{0.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 5e-5});
    const LabelMap labels(GridDims(3, 3), 1);
    SCLossConfig cfg;
    cfg.with_levels(1);
    const FieldMap a = grad_wrt_probs(pred, labels, cfg);
    CHECK(a.at({0, 0}) == 0.0);
    CHECK(a.at({1, 1}) == 0.0);
    CHECK(a.at({2, 2}) != 0.0);
    const auto fd = finite_diff_grad(pred, labels, cfg, 1e-4);
    CHECK(fd.clamp_hits.size() == 3);
    CHECK(fd.gradient.at({0, 0}) == 0.0);
  }

  TEST_CASE("step outside [1e-6, 1e-3] is rejected") {
    const GridDims d(3, 3);
    CHECK_THROWS_AS(finite_diff_grad(ProbabilityMap(d), LabelMap(d, 1), SCLossConfig{}, 1e-2), Error);
    CHECK_THROWS_AS(finite_diff_grad(ProbabilityMap(d), LabelMap(d, 1), SCLossConfig{}, 1e-8), Error);
  }

  TEST_CASE("logit gradient") {
    const GridDims d(6, 6);
    const SCLossConfig cfg;
    const FieldMap gz = grad_wrt_logits(FieldMap(d, 0.0), LabelMap(d, 1), cfg);
    const FieldMap gp = grad_wrt_probs(ProbabilityMap(d, 0.5), LabelMap(d, 1), cfg);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(gz[i] == doctest::Approx(0.25 * gp[i]).epsilon(1e-15));

    const FieldMap sat = grad_wrt_logits(FieldMap(d, 30.0), LabelMap(d, 1), cfg);
    for (double v : sat.values()) CHECK(std::abs(v) < 1e-9);

    Lcg64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
      FieldMap z(GridDims(8, 8));
      for (double& v : z.values()) v = rng.uniform(-3.0, 3.0);
      const auto inst = testing::random_instance(rng, GridDims(8, 8));
      const FieldMap a = grad_wrt_logits(z, inst.labels, cfg);
      const auto fd = finite_diff_grad_logits(z, inst.labels, cfg, 1e-4, FdScheme::central4);
      CHECK(max_rel(a, fd.gradient) < 1e-4);
    }
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) == 1.0);
  }

  TEST_CASE("sum rule") {
    Lcg64 rng(6);
    const auto inst = testing::random_instance(rng, GridDims(7, 9));
    SCLossConfig mean;
    SCLossConfig sum;
    sum.reduction = Reduction::sum;
    const FieldMap a = grad_wrt_probs(inst.pred, inst.labels, mean);
    const FieldMap b = grad_wrt_probs(inst.pred, inst.labels, sum);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(testing::rel(b[i], a[i] * 63.0) < 1e-12);
  }

  TEST_CASE("zero-weight level contributes nothing") {
    Lcg64 rng(7);
    const auto inst = testing::random_instance(rng, GridDims(8, 8));
    SCLossConfig k1;
    k1.with_levels(1);
    SCLossConfig w;
    w.level_weights = {1.0, 0.0};
    const FieldMap a = grad_wrt_probs(inst.pred, inst.labels, k1);
    const FieldMap b = grad_wrt_probs(inst.pred, inst.labels, w);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(testing::rel(a[i], b[i]) < 1e-14);
  }

  TEST_CASE("grad_check defaults pass") {
    const GradReport r = grad_check(1, GridDims(8, 8), SCLossConfig{}, 100, 1e-4, 1e-4);
    CHECK(r.pass);
    CHECK(r.trials == 100);
    CHECK(r.scheme == FdScheme::central4);
    CHECK(r.max_rel_error <= 1e-4);
    CHECK(r.pixels_checked + r.pixels_skipped == 6400);
    const GradReport r2 = grad_check(1, GridDims(8, 8), SCLossConfig{}, 100, 1e-4, 1e-4, FdScheme::central2);
    CHECK(r2.pass);
  }

  TEST_CASE("zero tolerance fails") {
    const GradReport r = grad_check(1, GridDims(4, 4), SCLossConfig{}, 2, 1e-4, 0.0);
    CHECK_FALSE(r.pass);
    CHECK(r.max_rel_error > 0.0);
  }

  TEST_CASE("every term combination passes a short check") {
    for (auto sr : {SingleResponse::bce, SingleResponse::mse, SingleResponse::l1}) {
      for (auto reg : {Regularizer::gaussian, Regularizer::distance, Regularizer::constant}) {
        for (int k = 1; k <= 3; ++k) {
          SCLossConfig cfg;
          cfg.with_levels(k);
          cfg.single_response = sr;
          cfg.regularizer = reg;
          const GradReport r = grad_check(3, GridDims(8, 8), cfg, 3, 1e-4, 1e-4);
          CAPTURE(to_string(sr));
          CAPTURE(to_string(reg));
          CAPTURE(k);
          CHECK(r.pass);
        }
      }
    }
  }

  TEST_CASE("fd scheme names") {
    CHECK(parse_fd_scheme("central2") == FdScheme::central2);
    CHECK(parse_fd_scheme(to_string(FdScheme::central4)) == FdScheme::central4);
    CHECK_FALSE(parse_fd_scheme("forward").has_value());
  }
}

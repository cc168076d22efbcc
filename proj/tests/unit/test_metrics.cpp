#include <doctest.h>

#include "helpers.hpp"
#include "scloss/error.hpp"
#include "scloss/lcg.hpp"
#include "scloss/metrics.hpp"

using namespace scloss;
using namespace scloss::metrics;
using doctest::Approx;

namespace {

ProbabilityMap row(std::vector<double> v) {
  const GridDims d(static_cast<int>(v.size()), 1);
  return ProbabilityMap(d, std::move(v));
}
LabelMap row(std::vector<int> v) {
  const GridDims d(static_cast<int>(v.size()), 1);
  return LabelMap(d, std::move(v));
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("mae identities") {
    const GridDims d(4, 4);
    CHECK(mae(ProbabilityMap(d, 1.0), LabelMap(d, 1)) == 0.0);
    CHECK(mae(ProbabilityMap(d, 0.5), LabelMap(d, 1)) == 0.5);
    CHECK(mae(ProbabilityMap(d, 0.0), LabelMap(d, 1)) == 1.0);
    CHECK_THROWS_AS(mae(ProbabilityMap(d, 0.0), LabelMap(GridDims(2, 8), 1)), Error);
  }

  TEST_CASE("adaptive threshold") {
    const GridDims d(3, 3);
    CHECK(adaptive_threshold(ProbabilityMap(d, 0.4)) == Approx(0.8).epsilon(1e-15));
    CHECK(adaptive_threshold(ProbabilityMap(d, 0.6)) == 1.0);
    CHECK(adaptive_threshold(ProbabilityMap(d, 0.0)) == 0.0);
  }

  TEST_CASE("f-measure worked example") {
    const auto pred = row(std::vector<double>{0.8, 0.6, 0.2, 0.0});
    const auto gt = row(std::vector<int>{1, 1, 0, 0});
    CHECK(f_measure(row(std::vector<int>{1, 0, 0, 0}), gt) == Approx(0.8125).epsilon(1e-12));
    CHECK(adaptive_threshold(pred) == Approx(0.8));
    CHECK(f_adp(pred, gt) == Approx(0.8125).epsilon(1e-12));
    const FMax fm = f_max(pred, gt);
    CHECK(fm.f_max == Approx(1.0).epsilon(1e-12));
    CHECK(fm.threshold > 0.2);
    CHECK(fm.threshold <= 0.6);
    CHECK(fm.pr_curve.size() == 256);
  }

  TEST_CASE("f-measure edge cases") {
    const auto gt = row(std::vector<int>{1, 0});
    CHECK(f_measure(row(std::vector<int>{0, 0}), gt) == 0.0);
    CHECK(f_measure(row(std::vector<int>{1, 1}), row(std::vector<int>{0, 0})) == 0.0);
    CHECK(f_measure(gt, gt) == Approx(1.0));
  }

  TEST_CASE("uninformative prediction") {
    const GridDims d(4, 4);
    LabelMap gt(d, 0);
    for (std::size_t i = 0; i < 8; ++i) gt[i] = 1;
    const FMax fm = f_max(ProbabilityMap(d, 0.5), gt);
    CHECK(fm.f_max == Approx(0.65 / 1.15).epsilon(1e-12));
    CHECK(fm.f_max == Approx(0.5652).epsilon(1e-4));
  }

  TEST_CASE("binarize is inclusive") {
    const auto b = binarize(row(std::vector<double>{0.5, 0.49, 0.51}), 0.5);
    CHECK(b.vector() == std::vector<int>{1, 0, 1});
  }

  TEST_CASE("f_max is at least f_adp") {
    Lcg64 rng(10);
    for (int t = 0; t < 100; ++t) {
      const auto inst = testing::random_instance(rng, GridDims(9, 9));
      const auto r = evaluate(inst.pred, inst.labels);
      CHECK(r.f_max >= r.f_adp);
      CHECK(r.mae >= 0.0);
      CHECK(r.mae <= 1.0);
    }
  }
}

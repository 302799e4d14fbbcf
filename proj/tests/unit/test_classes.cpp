#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "olr/classes.hpp"
#include "olr/rng.hpp"

using namespace olr;

TEST(Hypothesis, RampOracles) {
  const Hypothesis r = Ramp{0.2, 0.7, 0};
  EXPECT_DOUBLE_EQ(evaluate(r, Point{0.1}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(r, Point{0.45}), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(r, Point{0.9}), 1.0);
}

TEST(Hypothesis, JuntaDotProduct) {
  JuntaHyperplane j;
  j.weights = {0.4, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(evaluate(j, Point{0.5, 0.3, 0.9}), 0.2);
}

TEST(Hypothesis, DimensionMismatchThrows) {
  JuntaHyperplane j;
  j.weights = {0.4, 0.0};
  EXPECT_THROW(evaluate(j, Point{0.5}), InvalidInput);
  const FunctionClass cls = ramp_class(2.0, 2, 0.1, 0.3);
  EXPECT_THROW(cls.eval(0, Point{0.1, 0.2}), InvalidInput);
}

TEST(JuntaClass, Sizes) {
  EXPECT_EQ(appendix_class(8, 4, std::vector<std::size_t>{0, 2, 5, 7}).size(), 625u);
  EXPECT_LE(appendix_class(8, 4).size(), 43750u);
  EXPECT_EQ(appendix_class(8, 4).size(), 43750u);  // grid has no zero, so no duplicates
  EXPECT_EQ(appendix_class(1, 1).size(), 5u);
}

TEST(JuntaClass, CoefficientGrid) {
  const auto grid = junta_coefficient_grid();
  const std::vector<double> expected{-0.6, -0.2, 0.2, 0.6, 1.0};
  ASSERT_EQ(grid.size(), expected.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_DOUBLE_EQ(grid[i], expected[i]);
}

TEST(JuntaClass, SupportedHypothesesVanishOffSupport) {
  const FunctionClass cls = appendix_class(6, 2, std::vector<std::size_t>{1, 4});
  for (const auto& h : cls.hypotheses()) {
    const auto& w = std::get<JuntaHyperplane>(h).weights;
    for (std::size_t i : {0, 2, 3, 5}) EXPECT_EQ(w[i], 0.0);
  }
}

TEST(JuntaClass, RejectsBadSupport) {
  EXPECT_THROW(appendix_class(4, 5), InvalidInput);
  EXPECT_THROW(appendix_class(4, 2, std::vector<std::size_t>{1, 1}), InvalidInput);
  EXPECT_THROW(appendix_class(4, 2, std::vector<std::size_t>{1, 4}), InvalidInput);
}

TEST(BvClass, ZeroVariationIsConstants) {
  const FunctionClass cls = bv_class(0.0, 4, 2);
  EXPECT_EQ(cls.size(), 3u);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    EXPECT_DOUBLE_EQ(cls.eval(k, Point{0.1}), cls.eval(k, Point{0.9}));
  }
}

TEST(BvClass, TwoCellsAllPairsWithinVariationOne) {
  const FunctionClass cls = bv_class(1.0, 2, 2);
  EXPECT_EQ(cls.size(), 9u);
  bool has_step = false;
  for (const auto& h : cls.hypotheses()) {
    const auto& p = std::get<PiecewiseConstant>(h);
    if (p.values == std::vector<double>{0.0, 1.0}) has_step = true;
  }
  EXPECT_TRUE(has_step);
}

TEST(BvClass, ExcludesVariationTwoWhenBoundIsOne) {
  const FunctionClass cls = bv_class(1.0, 3, 1);
  for (const auto& h : cls.hypotheses()) {
    const auto& p = std::get<PiecewiseConstant>(h);
    EXPECT_NE(p.values, (std::vector<double>{0.0, 1.0, 0.0}));
    EXPECT_LE(p.total_variation, 1.0 + 1e-12);
  }
}

TEST(BvClass, CellLookup) {
  const FunctionClass cls = bv_class(1.0, 2, 1);
  for (const auto& h : cls.hypotheses()) {
    const auto& p = std::get<PiecewiseConstant>(h);
    EXPECT_DOUBLE_EQ(evaluate(h, Point{0.25}), p.values[0]);
    EXPECT_DOUBLE_EQ(evaluate(h, Point{0.75}), p.values[1]);
  }
}

TEST(RampClass, LipschitzConstantHolds) {
  const FunctionClass cls = ramp_class(4.0, 6, 0.05, 0.7);
  EXPECT_DOUBLE_EQ(cls.lipschitz_constant(), 4.0);
  Rng rng(2);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(), b = rng.uniform();
      EXPECT_LE(std::abs(cls.eval(k, Point{a}) - cls.eval(k, Point{b})),
                4.0 * std::abs(a - b) + 1e-12);
    }
  }
}

TEST(RampClass, RejectsRampsLeavingUnitInterval) {
  EXPECT_THROW(ramp_class(2.0, 3, 0.1, 0.6), InvalidInput);
  EXPECT_THROW(ramp_class(0.0, 3, 0.1, 0.2), InvalidInput);
}

TEST(FunctionClass, TracesAreRowMajor) {
  const std::vector<double> values{0.1, 0.9};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> pts{{0.0}, {1.0}, {2.0}};
  const auto tr = cls.traces(pts);
  ASSERT_EQ(tr.size(), 6u);
  EXPECT_DOUBLE_EQ(tr[2], 0.1);
  EXPECT_DOUBLE_EQ(tr[3], 0.9);
}

TEST(FunctionClass, MergeDeduplicatesJuntas) {
  const FunctionClass a = appendix_class(3, 1, std::vector<std::size_t>{0});
  const FunctionClass b = appendix_class(3, 1);
  EXPECT_EQ(a.merged_with(b).size(), b.size());
}

TEST(ThresholdClass, Indicator) {
  const std::vector<double> th{0.5};
  const FunctionClass cls = threshold_class(th);
  EXPECT_DOUBLE_EQ(cls.eval(0, Point{0.49}), 0.0);
  EXPECT_DOUBLE_EQ(cls.eval(0, Point{0.5}), 1.0);
}

#include <gtest/gtest.h>

#include <cmath>

#include "olr/classes.hpp"
#include "olr/core.hpp"
#include "olr/rng.hpp"

using namespace olr;

TEST(Loss, L1Oracles) {
  const LossSpec l1 = LossSpec::l1();
  EXPECT_DOUBLE_EQ(loss(l1, 0.3, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(loss(l1, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(loss(l1, 0.25, 0.75), 0.5);
}

TEST(Loss, NormalizationDividesByBound) {
  const LossSpec spec = LossSpec::l1(4.0);
  EXPECT_DOUBLE_EQ(normalized_loss(spec, 0.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(loss(spec, 0.0, 2.0), 2.0);
}

TEST(Loss, ClampOnlyWhenRequested) {
  LossSpec spec = LossSpec::l1(1.0);
  EXPECT_THROW(normalized_loss(spec, 0.0, 3.0), ContractViolation);
  spec.clamp_normalized = true;
  EXPECT_DOUBLE_EQ(normalized_loss(spec, 0.0, 3.0), 1.0);
}

TEST(Loss, RejectsBadSpecs) {
  EXPECT_THROW(LossSpec::l1(0.0).validate(), InvalidInput);
  EXPECT_THROW(LossSpec::l1(-1.0).validate(), InvalidInput);
  LossSpec custom;
  custom.kind = LossKind::custom;
  EXPECT_THROW(custom.validate(), InvalidInput);
}

TEST(Loss, CustomLipschitzHolds) {
  LossSpec huber;
  huber.kind = LossKind::custom;
  huber.custom = [](double a, double y) {
    const double r = std::abs(a - y);
    return r <= 0.5 ? r * r : r - 0.25;
  };
  huber.validate();
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(), b = rng.uniform(), y = rng.uniform();
    EXPECT_LE(std::abs(loss(huber, a, y) - loss(huber, b, y)),
              huber.lipschitz_constant * std::abs(a - b) + 1e-12);
  }
}

TEST(BestInClass, PerfectHypothesis) {
  const std::vector<double> values{0.0, 1.0};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> x(4, Point{0.5});
  const std::vector<double> y(4, 1.0);
  const auto best = best_in_class_loss(cls, ExampleSequence(x, y), LossSpec::l1());
  EXPECT_DOUBLE_EQ(best.loss, 0.0);
  EXPECT_EQ(best.index, 1u);
}

TEST(BestInClass, TieGoesToLowestIndex) {
  const std::vector<double> values{0.0, 1.0};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> x(4, Point{0.5});
  const std::vector<double> y(4, 0.5);
  const auto best = best_in_class_loss(cls, ExampleSequence(x, y), LossSpec::l1());
  EXPECT_DOUBLE_EQ(best.loss, 2.0);
  EXPECT_EQ(best.index, 0u);
}

TEST(BestInClass, EmptyClassThrows) {
  const FunctionClass empty({}, 1, Interval{});
  const std::vector<Point> x(1, Point{0.5});
  const std::vector<double> y(1, 0.5);
  EXPECT_THROW(best_in_class_loss(empty, ExampleSequence(x, y), LossSpec::l1()), EmptyClass);
}

TEST(Regret, Arithmetic) {
  const std::vector<double> values{0.5};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> x(10, Point{0.0});
  const std::vector<double> y(10, 1.0);
  const std::vector<double> learner(10, 1.0);
  const RegretReport r = accumulate_regret(learner, cls, ExampleSequence(x, y), LossSpec::l1());
  ASSERT_EQ(r.regret.size(), 10u);
  EXPECT_DOUBLE_EQ(r.final_regret(), 5.0);
  EXPECT_DOUBLE_EQ(r.cumulative_learner_loss[4], 5.0);
}

TEST(Regret, ZeroLossesGiveZeroRegret) {
  const std::vector<double> values{1.0};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> x(6, Point{0.0});
  const std::vector<double> y(6, 1.0);
  const std::vector<double> learner(6, 0.0);
  const RegretReport r = accumulate_regret(learner, cls, ExampleSequence(x, y), LossSpec::l1());
  for (double v : r.regret) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Regret, LengthMismatchThrows) {
  const std::vector<double> values{1.0};
  const FunctionClass cls = constant_class(values);
  const std::vector<Point> x(3, Point{0.0});
  const std::vector<double> y(3, 1.0);
  const std::vector<double> learner(2, 0.0);
  EXPECT_THROW(accumulate_regret(learner, cls, ExampleSequence(x, y), LossSpec::l1()),
               InvalidInput);
}

TEST(Sequence, RejectsRaggedPoints) {
  const std::vector<Point> x{{0.1, 0.2}, {0.3}};
  const std::vector<double> y{0.0, 0.0};
  EXPECT_THROW(ExampleSequence(x, y), InvalidInput);
}

TEST(Seeds, ChildZeroIsParent) {
  EXPECT_EQ(child_seed(42, 0), 42u);
  EXPECT_NE(child_seed(42, 1), 42u);
  EXPECT_NE(derive_seed(42, 1), derive_seed(42, 2));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

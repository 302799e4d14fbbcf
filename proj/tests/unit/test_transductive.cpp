#include <gtest/gtest.h>

#include <cmath>

#include "olr/classes.hpp"
#include "olr/experiment.hpp"
#include "olr/rng.hpp"
#include "olr/streams.hpp"
#include "olr/transductive.hpp"

using namespace olr;

namespace {

double run_total(OnlineLearner& l, const ExampleSequence& seq, const LossSpec& loss) {
  double total = 0.0;
  for (double v : run_online(l, seq, loss).losses) total += v;
  return total;
}

}  // namespace

TEST(Bound, Oracles) {
  EXPECT_DOUBLE_EQ(transductive_regret_bound(1000, 625, 0.0, 1.0),
                   std::sqrt(1000.0 * std::log(625.0) / 2.0));
  EXPECT_NEAR(transductive_regret_bound(1000, 625, 0.0, 1.0), 56.73, 1e-2);
  EXPECT_DOUBLE_EQ(transductive_regret_bound(100, 4, 0.1, 1.0),
                   10.0 + std::sqrt(100.0 * std::log(4.0) / 2.0));
  EXPECT_NEAR(transductive_regret_bound(100, 4, 0.1, 1.0), 18.33, 1e-2);
  EXPECT_DOUBLE_EQ(transductive_regret_bound(77, 1, 0.0, 1.0), 0.0);
}

TEST(Transductive, ConstantPairRegretWithinBound) {
  const std::vector<double> v{0.0, 1.0};
  const FunctionClass cls = constant_class(v);
  constexpr std::size_t kT = 300;
  const auto pts = iid_uniform_points(1, kT, 0.0, 1.0, 1);
  Rng rng(2);
  std::vector<double> y(kT);
  for (double& l : y) l = rng.uniform() < 0.3 ? 1.0 : 0.0;
  const ExampleSequence seq(pts, y);
  TransductiveOptions opts;
  opts.mode = MwaMode::averaged;
  TransductiveLearner learner(cls, pts, opts, 3);
  EXPECT_EQ(learner.experts(), 2u);
  const double best = best_in_class_loss(cls, seq, opts.loss).loss;
  EXPECT_LE(run_total(learner, seq, opts.loss) - best, std::sqrt(kT * std::log(2.0) / 2.0));
}

TEST(Transductive, WideRadiusSingleCenter) {
  const FunctionClass cls = bv_class(1.0, 3, 2);
  const auto pts = iid_uniform_points(1, 40, 0.0, 1.0, 4);
  TransductiveOptions opts;
  opts.alpha = 1.0;
  TransductiveLearner learner(cls, pts, opts, 5);
  ASSERT_EQ(learner.experts(), 1u);
  const double c0 = learner.table().at(0, 0);
  for (std::size_t t = 0; t < 40; ++t) {
    EXPECT_DOUBLE_EQ(learner.predict(pts[t]), learner.table().at(0, t));
    learner.reveal(0.0);
  }
  EXPECT_DOUBLE_EQ(c0, 0.5);
}

TEST(Transductive, ProtocolEnforced) {
  const std::vector<double> v{0.0, 1.0};
  const FunctionClass cls = constant_class(v);
  const std::vector<Point> pts(2, Point{0.5});
  TransductiveLearner learner(cls, pts, {}, 1);
  EXPECT_THROW(learner.reveal(0.0), ContractViolation);
  learner.predict(pts[0]);
  EXPECT_THROW(learner.predict(pts[0]), ContractViolation);
  learner.reveal(1.0);
  learner.predict(pts[1]);
  learner.reveal(1.0);
  EXPECT_THROW(learner.predict(pts[0]), ContractViolation);
}

TEST(Transductive, EmptyInputsThrow) {
  const FunctionClass empty({}, 1, Interval{});
  const std::vector<Point> pts(2, Point{0.5});
  EXPECT_THROW(TransductiveLearner(empty, pts, {}, 1), EmptyClass);
  const std::vector<double> v{0.0};
  const FunctionClass one = constant_class(v);
  EXPECT_THROW(TransductiveLearner(one, std::vector<Point>{}, {}, 1), InvalidInput);
}

TEST(Transductive, ZeroRadiusEqualsDistinctTraces) {
  const FunctionClass cls = appendix_class(4, 2, std::vector<std::size_t>{0, 3});
  const LdsStream s = gen_lds_sparse(4, 2, 30, 6);
  TransductiveLearner learner(cls, s.points, {}, 1);
  EXPECT_EQ(learner.experts(), distinct_traces(cls.traces(s.points), cls.size(), 30).size());
  EXPECT_TRUE(learner.cover_exact());
}

TEST(ClassMwa, MatchesTransductiveWhenTracesDistinct) {
  // Distinct traces and identical expert order give identical runs.
  std::vector<double> th;
  for (int i = 0; i < 8; ++i) th.push_back((i + 0.5) / 8.0);
  const FunctionClass cls = threshold_class(th);
  std::vector<Point> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({i / 8.0});
  for (int i = 0; i < 40; ++i) pts.push_back({(i % 9) / 8.0});
  Rng rng(7);
  std::vector<double> y(pts.size());
  for (double& l : y) l = rng.uniform();
  const ExampleSequence seq(pts, y);
  for (MwaMode mode : {MwaMode::sampled, MwaMode::averaged}) {
    TransductiveOptions opts;
    opts.mode = mode;
    TransductiveLearner a(cls, pts, opts, 9);
    ClassMwaLearner b(cls, pts.size(), opts.loss, 9, mode);
    EXPECT_EQ(run_online(a, seq, opts.loss).losses, run_online(b, seq, opts.loss).losses);
  }
}

TEST(Transductive, CoverRegretWithinBound) {
  const FunctionClass cls = ramp_class(4.0, 10, 0.05, 0.7);
  constexpr std::size_t kT = 200;
  const auto pts = iid_uniform_points(1, kT, 0.0, 1.0, 8);
  const ExampleSequence seq = label_with_noise(pts, cls[3], 0.1, 9, Interval{0.0, 1.0});
  TransductiveOptions opts;
  opts.alpha = 0.1;
  opts.mode = MwaMode::averaged;
  TransductiveLearner learner(cls, pts, opts, 1);
  const double best = best_in_class_loss(cls, seq, opts.loss).loss;
  EXPECT_LE(run_total(learner, seq, opts.loss) - best,
            transductive_regret_bound(kT, double(learner.experts()), 0.1, 1.0));
}

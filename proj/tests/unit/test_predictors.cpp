#include <gtest/gtest.h>

#include <cmath>

#include "olr/experiment.hpp"
#include "olr/predictors.hpp"
#include "olr/rng.hpp"
#include "olr/streams.hpp"

using namespace olr;

namespace {

std::vector<Point> drifting(std::size_t horizon, double step) {
  std::vector<Point> pts;
  for (std::size_t t = 0; t < horizon; ++t) pts.push_back({step * static_cast<double>(t)});
  return pts;
}

class ConstantGarbage final : public Forecaster {
 public:
  void observe(std::span<const double>) override {}
  std::vector<Point> propose(std::size_t horizon) const override {
    return std::vector<Point>(horizon, Point{-7.0});
  }
};

}  // namespace

TEST(Wrapper, TrueForecasterNeverRefreshesAfterStart) {
  const auto truth = iid_uniform_points(2, 50, 0.0, 1.0, 1);
  auto pred = perfect_predictor(truth);
  const std::vector<double> eps{0.1};
  const auto log = mistake_metrics(*pred, truth, eps);
  EXPECT_EQ(log.zero_one_count, 0u);
  EXPECT_EQ(pred->refreshes(), 1u);
  EXPECT_EQ(pred->misses(), 0u);
}

TEST(Wrapper, GarbageRefreshesEveryRound) {
  const auto truth = iid_uniform_points(1, 30, 0.0, 1.0, 2);
  auto pred = lazy_consistent_wrap(std::make_unique<ConstantGarbage>(), 30, MissCriterion{});
  const std::vector<double> eps{0.5};
  const auto log = mistake_metrics(*pred, truth, eps);
  EXPECT_EQ(log.zero_one_count, 29u);
  EXPECT_EQ(log.eps_ball_counts.at(0.5), 29u);
  EXPECT_EQ(pred->misses(), 29u);
}

TEST(Wrapper, PrefixMatchesObservations) {
  const auto truth = iid_uniform_points(1, 20, 0.0, 1.0, 3);
  auto pred = lazy_consistent_wrap(std::make_unique<ConstantGarbage>(), 20, MissCriterion{});
  for (std::size_t t = 0; t < 20; ++t) {
    pred->observe(truth[t]);
    for (std::size_t s = 0; s <= t; ++s) EXPECT_EQ(pred->forecast()[s], truth[s]);
  }
}

TEST(Wrapper, HalfEpsilonForecastsNeverMissInEpsMode) {
  const auto truth = iid_uniform_points(1, 100, 0.0, 1.0, 4);
  auto pred = shifted_predictor(truth, 0.05, MissCriterion::eps_ball(0.1));
  for (const Point& x : truth) EXPECT_FALSE(pred->observe(x));
  EXPECT_EQ(pred->misses(), 0u);
  EXPECT_EQ(pred->refreshes(), 1u);
}

TEST(Wrapper, ObservingPastHorizonThrows) {
  const auto truth = iid_uniform_points(1, 3, 0.0, 1.0, 5);
  auto pred = perfect_predictor(truth);
  for (const Point& x : truth) pred->observe(x);
  EXPECT_THROW(pred->observe(truth[0]), ContractViolation);
}

TEST(Lds, NoiseFreeRecoveryStopsMissing) {
  const std::size_t d = 6;
  const LdsStream s = gen_lds_sparse(d, d, 200, 7);
  auto pred = lds_predictor(d, 200, d);
  const std::vector<double> eps{1e-6};
  const auto log = mistake_metrics(*pred, s.points, eps);
  for (std::size_t t = d + 1; t < 200; ++t) EXPECT_FALSE(log.zero_one_flags[t]) << "round " << t;
  EXPECT_LE(log.zero_one_count, d);
}

TEST(Lds, SparseSupportIsRecovered) {
  const LdsStream s = gen_lds_sparse(8, 3, 100, 8);
  auto pred = lds_predictor(8, 100, 3);
  const std::vector<double> eps{1e-6};
  const auto log = mistake_metrics(*pred, s.points, eps);
  EXPECT_LE(log.zero_one_count, 3u);
}

TEST(Lds, GeometricDecayForecastExact) {
  const Eigen::MatrixXd a = 0.5 * Eigen::MatrixXd::Identity(1, 1);
  const auto pts = iterate_lds(a, Point{1.0}, 20);
  LdsForecaster f(1, 1);
  f.observe(pts[0]);
  f.observe(pts[1]);
  ASSERT_TRUE(f.identified());
  const auto out = f.propose(20);
  for (std::size_t t = 0; t < 20; ++t) EXPECT_NEAR(out[t][0], std::pow(0.5, double(t)), 1e-15);
}

TEST(RepeatLast, ConstantStreamHasNoMisses) {
  const auto pts = iterate_lds(Eigen::MatrixXd::Identity(3, 3), Point{0.2, 0.4, 0.6}, 40);
  auto pred = repeat_last_predictor(3, 40);
  const std::vector<double> eps{1e-3};
  EXPECT_EQ(mistake_metrics(*pred, pts, eps).zero_one_count, 0u);
}

TEST(RepeatLast, DriftStepSeparatesEpsilons) {
  const double step = 0.01;
  const auto pts = drifting(50, step);
  // Zero-one laziness refreshes every round, so each forecast is the last example.
  auto pred = repeat_last_predictor(1, 50);
  const std::vector<double> eps{0.005, 0.0099, 0.0101, 0.02};
  const auto log = mistake_metrics(*pred, pts, eps);
  EXPECT_EQ(log.eps_ball_counts.at(0.005), 49u);
  EXPECT_EQ(log.eps_ball_counts.at(0.0099), 49u);
  EXPECT_EQ(log.eps_ball_counts.at(0.0101), 0u);
  EXPECT_EQ(log.eps_ball_counts.at(0.02), 0u);
}

TEST(Corrupted, ZeroRateIsPerfect) {
  const auto truth = iid_uniform_points(1, 60, 0.0, 1.0, 9);
  auto pred = corrupted_predictor(truth, MistakeSchedule::with_rate(0.0), 1.0, 1);
  const std::vector<double> eps{0.1};
  EXPECT_EQ(mistake_metrics(*pred, truth, eps).zero_one_count, 0u);
}

TEST(Corrupted, ExplicitRoundsCounted) {
  const auto truth = iid_uniform_points(1, 40, 0.0, 1.0, 10);
  auto pred = corrupted_predictor(truth, MistakeSchedule::at({10, 20}), 1.0, 1);
  const std::vector<double> eps{0.5, 1.0, 1.5};
  const auto log = mistake_metrics(*pred, truth, eps);
  EXPECT_EQ(log.zero_one_count, 2u);
  EXPECT_EQ(log.eps_ball_counts.at(0.5), 2u);
  EXPECT_EQ(log.eps_ball_counts.at(1.0), 2u);
  EXPECT_EQ(log.eps_ball_counts.at(1.5), 0u);
  EXPECT_TRUE(log.zero_one_flags[10]);
  EXPECT_TRUE(log.zero_one_flags[20]);
}

TEST(Corrupted, RateExpectation) {
  constexpr std::size_t kT = 400;
  const double rho = std::pow(double(kT), 0.5 - 1.0);
  const auto truth = iid_uniform_points(1, kT, 0.0, 1.0, 11);
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 500; ++s) {
    auto pred = corrupted_predictor(truth, MistakeSchedule::with_rate(rho), 1.0, derive_seed(12, s));
    const std::vector<double> eps{0.5};
    counts.push_back(static_cast<double>(mistake_metrics(*pred, truth, eps).zero_one_count));
  }
  const MeanSe m = mean_se(counts);
  const double expected = std::sqrt(double(kT)) - rho;
  EXPECT_NEAR(expected, 19.95, 1e-12);
  EXPECT_NEAR(m.mean, expected, 3.0 * m.se);
}

TEST(Corrupted, RealizedScheduleSkipsRoundZero) {
  const auto r = MistakeSchedule::with_rate(1.0).realize(10, 1);
  ASSERT_EQ(r.size(), 9u);
  EXPECT_EQ(r.front(), 1u);
  const auto e = MistakeSchedule::at({0, 3, 12}).realize(10, 1);
  EXPECT_EQ(e, (std::vector<std::size_t>{3}));
}

TEST(Distance, Metrics) {
  const Point a{0.0, 0.0}, b{3.0, 4.0};
  EXPECT_DOUBLE_EQ(distance(a, b, Metric::euclidean), 5.0);
  EXPECT_DOUBLE_EQ(distance(a, b, Metric::max_abs), 4.0);
}

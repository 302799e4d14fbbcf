#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "olr/augmented.hpp"
#include "olr/classes.hpp"
#include "olr/streams.hpp"

using namespace olr;

namespace {

using Intervals = std::vector<std::pair<std::size_t, std::size_t>>;

// Records how many examples the predictor had seen whenever it proposes.
class SpyForecaster final : public Forecaster {
 public:
  SpyForecaster(std::vector<Point> truth, std::vector<std::size_t>* log)
      : truth_(std::move(truth)), log_(log) {}
  void observe(std::span<const double>) override { ++seen_; }
  std::vector<Point> propose(std::size_t horizon) const override {
    log_->push_back(seen_);
    // Future entries are deliberately wrong so every round is a miss.
    std::vector<Point> out(horizon, Point{-1.0});
    for (std::size_t t = 0; t < seen_ && t < horizon; ++t) out[t] = truth_[t];
    return out;
  }

 private:
  std::vector<Point> truth_;
  std::vector<std::size_t>* log_;
  std::size_t seen_ = 0;
};

struct Fixture {
  FunctionClass cls = ramp_class(3.0, 6, 0.05, 0.6);
  std::vector<Point> pts = iid_uniform_points(1, 64, 0.0, 1.0, 1);
  ExampleSequence seq = label_with_noise(pts, cls[2], 0.05, 2, Interval{0.0, 1.0});
  TransductiveOptions opts;
};

}  // namespace

TEST(Pieces, Intervals) {
  EXPECT_EQ(piece_intervals(10, 1), (Intervals{{0, 5}, {5, 10}}));
  EXPECT_EQ(piece_intervals(10, 2), (Intervals{{0, 4}, {4, 8}, {8, 10}}));
  EXPECT_EQ(piece_intervals(10, 0), (Intervals{{0, 10}}));
}

TEST(Pieces, CoverHorizonWithoutGaps) {
  for (std::size_t horizon : {1, 7, 64, 100}) {
    for (std::size_t c = 0; c < horizon; ++c) {
      const auto iv = piece_intervals(horizon, c);
      ASSERT_FALSE(iv.empty());
      EXPECT_EQ(iv.front().first, 0u);
      EXPECT_EQ(iv.back().second, horizon);
      for (std::size_t i = 1; i < iv.size(); ++i) EXPECT_EQ(iv[i].first, iv[i - 1].second);
      for (const auto& [b, e] : iv) EXPECT_LT(b, e);
    }
  }
}

TEST(Grids, PieceGrids) {
  EXPECT_EQ(piece_grid(5, PieceGrid::full), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(piece_grid(10, PieceGrid::powers_of_two), (std::vector<std::size_t>{0, 1, 2, 4, 8}));
  EXPECT_EQ(piece_grid(8, PieceGrid::automatic, 10).size(), 8u);
  EXPECT_EQ(piece_grid(20, PieceGrid::automatic, 10), piece_grid(20, PieceGrid::powers_of_two));
}

TEST(Grids, EpsilonGrid) {
  const auto g = epsilon_grid(1024, 1.0);
  ASSERT_FALSE(g.empty());
  EXPECT_DOUBLE_EQ(g.front(), 0x1.0p-20);
  EXPECT_DOUBLE_EQ(g.back(), 512.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i], 2.0 * g[i - 1]);
  EXPECT_EQ(g.size(), 30u);
}

TEST(Restart, PerfectPredictorMatchesTransductive) {
  Fixture f;
  TransductiveLearner ref(f.cls, f.pts, f.opts, 5);
  const auto a = run_online(ref, f.seq, f.opts.loss).losses;
  auto learner = make_alg2(perfect_predictor(f.pts), make_transductive_factory(f.cls, f.opts), 5);
  const auto b = run_online(*learner, f.seq, f.opts.loss).losses;
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
  EXPECT_EQ(learner->restarts(), 1u);
}

TEST(Restart, AlwaysWrongRestartsEveryRound) {
  Fixture f;
  std::vector<std::size_t> log;
  auto pred = lazy_consistent_wrap(std::make_unique<SpyForecaster>(f.pts, &log), 64, MissCriterion{});
  auto learner = make_alg2(std::move(pred), make_transductive_factory(f.cls, f.opts), 1);
  run_online(*learner, f.seq, f.opts.loss);
  EXPECT_EQ(learner->restarts(), 64u);
  for (std::size_t t = 0; t < 64; ++t) EXPECT_EQ(learner->restart_rounds()[t], t);
}

TEST(Restart, PredictorNeverSeesTheFuture) {
  Fixture f;
  std::vector<std::size_t> log;
  auto pred = lazy_consistent_wrap(std::make_unique<SpyForecaster>(f.pts, &log), 64, MissCriterion{});
  auto learner = make_alg2(std::move(pred), make_transductive_factory(f.cls, f.opts), 1);
  for (std::size_t t = 0; t < 64; ++t) {
    learner->predict(f.pts[t]);
    // Refreshes during round t happen with exactly t + 1 examples observed.
    EXPECT_EQ(log.back(), t + 1);
    EXPECT_EQ(learner->predictor().observed(), t + 1);
    learner->reveal(f.seq[t].y);
  }
}

TEST(Restart, ExplicitMistakesCountRestarts) {
  Fixture f;
  auto pred = corrupted_predictor(f.pts, MistakeSchedule::at({9, 33}), 0.5, 1);
  auto learner = make_alg2(std::move(pred), make_transductive_factory(f.cls, f.opts), 1);
  run_online(*learner, f.seq, f.opts.loss);
  EXPECT_EQ(learner->restarts(), 3u);
  EXPECT_EQ(learner->restart_rounds(), (std::vector<std::size_t>{0, 9, 33}));
}

TEST(Restart, EpsModeRestartsOnlyOnViolations) {
  Fixture f;
  auto pred = corrupted_predictor(f.pts, MistakeSchedule::at({5, 40}), 0.5,
                                  1, MissCriterion::eps_ball(0.1));
  auto learner = make_alg2(std::move(pred), make_transductive_factory(f.cls, f.opts), 1);
  run_online(*learner, f.seq, f.opts.loss);
  EXPECT_LE(learner->restarts(), 3u);
  EXPECT_EQ(learner->restarts(), 3u);
}

TEST(ExpertC, ZeroPiecesMatchesRestart) {
  Fixture f;
  auto a = make_alg2(perfect_predictor(f.pts), make_transductive_factory(f.cls, f.opts), 4);
  auto b = make_expert_c(0, 64, restart_factory(perfect_factory(f.pts),
                                                make_transductive_factory(f.cls, f.opts)), 4);
  EXPECT_EQ(run_online(*a, f.seq, f.opts.loss).losses, run_online(*b, f.seq, f.opts.loss).losses);
}

TEST(ExpertC, PiecesUseFreshLearners) {
  Fixture f;
  auto b = make_expert_c(3, 64, restart_factory(perfect_factory(f.pts),
                                                make_transductive_factory(f.cls, f.opts)), 4);
  EXPECT_EQ(b->intervals().size(), 4u);
  EXPECT_NO_THROW(run_online(*b, f.seq, f.opts.loss));
}

TEST(Meta, IdenticalExpertsBehaveLikeOne) {
  Fixture f;
  f.opts.mode = MwaMode::averaged;
  std::vector<std::unique_ptr<OnlineLearner>> experts;
  for (int i = 0; i < 3; ++i) experts.push_back(std::make_unique<TransductiveLearner>(f.cls, f.pts, f.opts, 1));
  MetaLearner meta(std::move(experts), 64, f.opts.loss, 2);
  TransductiveLearner single(f.cls, f.pts, f.opts, 1);
  const auto a = run_online(meta, f.seq, f.opts.loss).predictions;
  const auto b = run_online(single, f.seq, f.opts.loss).predictions;
  for (std::size_t t = 0; t < a.size(); ++t) EXPECT_DOUBLE_EQ(a[t], b[t]);
}

TEST(Meta, GridOfOneMatchesExpert) {
  Fixture f;
  const std::vector<std::size_t> grid{2};
  auto meta = make_piece_meta(grid, 64, restart_factory(perfect_factory(f.pts),
                                                        make_transductive_factory(f.cls, f.opts)),
                              f.opts.loss, 7);
  auto expert = make_expert_c(2, 64, restart_factory(perfect_factory(f.pts),
                                                     make_transductive_factory(f.cls, f.opts)),
                              child_seed(7, 0));
  EXPECT_EQ(meta->experts(), 1u);
  EXPECT_EQ(run_online(*meta, f.seq, f.opts.loss).losses,
            run_online(*expert, f.seq, f.opts.loss).losses);
}

TEST(Augmented, KindNamesRoundTrip) {
  for (auto kind : {AugmentedKind::alg2_restart, AugmentedKind::expert_c, AugmentedKind::alg4_meta,
                    AugmentedKind::alg5_restart_eps, AugmentedKind::alg6_meta_eps,
                    AugmentedKind::eps_grid_meta}) {
    EXPECT_EQ(parse_augmented_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_augmented_kind("alg7").has_value());
}

TEST(Augmented, ConfigValidation) {
  AugmentedConfig c;
  c.kind = AugmentedKind::alg5_restart_eps;
  EXPECT_THROW(c.validate(100), InvalidInput);
  c.epsilon = 0.1;
  EXPECT_NO_THROW(c.validate(100));
  c.kind = AugmentedKind::expert_c;
  EXPECT_THROW(c.validate(100), InvalidInput);
  c.pieces = 200;
  EXPECT_THROW(c.validate(100), InvalidInput);
}

TEST(Augmented, EveryKindRunsAndIsDeterministic) {
  Fixture f;
  AugmentedParts parts;
  parts.predictors = [&](MissCriterion m) { return perfect_factory(f.pts, m); };
  parts.transductive = make_transductive_factory(f.cls, f.opts);
  parts.loss = f.opts.loss;
  for (auto kind : {AugmentedKind::alg2_restart, AugmentedKind::expert_c, AugmentedKind::alg4_meta,
                    AugmentedKind::alg5_restart_eps, AugmentedKind::alg6_meta_eps,
                    AugmentedKind::eps_grid_meta}) {
    AugmentedConfig c;
    c.kind = kind;
    c.epsilon = 0.05;
    c.pieces = 2;
    c.eps_grid = {0.01, 0.1};
    auto a = make_augmented(c, 64, parts, 3);
    auto b = make_augmented(c, 64, parts, 3);
    EXPECT_EQ(run_online(*a, f.seq, f.opts.loss).losses, run_online(*b, f.seq, f.opts.loss).losses)
        << to_string(kind);
  }
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olr/learner.hpp"
#include "olr/mwa.hpp"
#include "olr/predictors.hpp"
#include "olr/transductive.hpp"

namespace olr {

/// Restart learner over a lazy predictor. Round t: the predictor observes
/// x_t; on the first round, or when the standing forecast missed x_t under the
/// predictor's laziness criterion, a fresh transductive learner is built on
/// the refreshed forecast for rounds t..T. Predictions and labels go to the
/// current inner learner.
///
/// With a zero-one predictor this is the plain restart scheme; with an
/// eps-ball predictor it is the epsilon variant.
class RestartLearner final : public OnlineLearner {
 public:
  RestartLearner(PredictorPtr predictor, TransductiveFactory factory, std::uint64_t seed);

  double predict(std::span<const double> x) override;
  void reveal(double y) override;

  std::size_t restarts() const { return restarts_; }
  std::size_t round() const { return round_; }
  const ForecastingPredictor& predictor() const { return *predictor_; }
  const std::vector<std::size_t>& restart_rounds() const { return restart_rounds_; }

 private:
  PredictorPtr predictor_;
  TransductiveFactory factory_;
  std::unique_ptr<OnlineLearner> current_;
  std::uint64_t seed_;
  std::size_t restarts_ = 0;
  std::size_t round_ = 0;
  std::vector<std::size_t> restart_rounds_;
};

/// Builds the learner that owns the sub-stream [begin, end).
using IntervalLearnerFactory =
    std::function<std::unique_ptr<OnlineLearner>(std::size_t begin, std::size_t end,
                                                 std::uint64_t seed)>;

IntervalLearnerFactory restart_factory(PredictorFactory predictors, TransductiveFactory inner);

/// Boundaries j * ceil(T / (c + 1)) for j = 1..c, clamped to T; returns the
/// non-empty half-open intervals covering [0, T).
std::vector<std::pair<std::size_t, std::size_t>> piece_intervals(std::size_t horizon,
                                                                 std::size_t pieces);

/// Splits the horizon into c + 1 pieces and runs an independent learner per
/// piece, each starting when its piece begins.
class PiecewiseLearner final : public OnlineLearner {
 public:
  PiecewiseLearner(std::size_t pieces, std::size_t horizon, IntervalLearnerFactory factory,
                   std::uint64_t seed);

  double predict(std::span<const double> x) override;
  void reveal(double y) override;

  const std::vector<std::pair<std::size_t, std::size_t>>& intervals() const { return intervals_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> intervals_;
  IntervalLearnerFactory factory_;
  std::unique_ptr<OnlineLearner> current_;
  std::uint64_t seed_;
  std::size_t round_ = 0;
  std::size_t piece_ = 0;
};

/// Exponential weights over a set of learners that all play every round. The
/// meta engine gets seed derive_seed(seed, kMetaSeedTag).
class MetaLearner final : public OnlineLearner {
 public:
  MetaLearner(std::vector<std::unique_ptr<OnlineLearner>> experts, std::size_t horizon,
              const LossSpec& loss, std::uint64_t seed, MwaMode mode = MwaMode::sampled);

  double predict(std::span<const double> x) override;
  void reveal(double y) override;

  std::size_t experts() const { return experts_.size(); }
  const Mwa& engine() const { return mwa_; }
  const OnlineLearner& expert(std::size_t i) const { return *experts_[i]; }

 private:
  std::vector<std::unique_ptr<OnlineLearner>> experts_;
  Mwa mwa_;
  LossSpec loss_;
  std::vector<double> predictions_;
  std::vector<double> losses_;
};

inline constexpr std::uint64_t kMetaSeedTag = 0x6d657461ULL;

enum class PieceGrid { full, powers_of_two, automatic };

/// Piece counts for the meta learners: full = 0..T-1, powers_of_two = 0 and
/// 2^i < T, automatic = full when T <= full_grid_limit.
std::vector<std::size_t> piece_grid(std::size_t horizon, PieceGrid grid,
                                    std::size_t full_grid_limit = 1000);

/// Geometric epsilon grid {2^i : 2^-20 <= 2^i < T^kappa}.
std::vector<double> epsilon_grid(std::size_t horizon, double kappa = 1.0,
                                 double floor = 0x1.0p-20);

enum class AugmentedKind { alg2_restart, expert_c, alg4_meta, alg5_restart_eps, alg6_meta_eps,
                           eps_grid_meta };

std::optional<AugmentedKind> parse_augmented_kind(const std::string& name);
std::string to_string(AugmentedKind kind);

struct AugmentedConfig {
  AugmentedKind kind = AugmentedKind::alg2_restart;
  std::optional<double> epsilon;
  std::optional<std::size_t> pieces;  // expert-c
  std::vector<double> eps_grid;       // eps-grid-meta; empty -> epsilon_grid(T, kappa)
  double kappa = 1.0;
  PieceGrid grid = PieceGrid::automatic;
  std::size_t full_grid_limit = 1000;
  MwaMode meta_mode = MwaMode::sampled;

  void validate(std::size_t horizon) const;
};

/// Everything an augmented learner needs besides its config. `predictors`
/// builds predictors for a given laziness criterion.
struct AugmentedParts {
  std::function<PredictorFactory(MissCriterion)> predictors;
  TransductiveFactory transductive;
  LossSpec loss;
};

// Named constructors, one per algorithm.
std::unique_ptr<RestartLearner> make_alg2(PredictorPtr predictor, TransductiveFactory inner,
                                          std::uint64_t seed);
std::unique_ptr<PiecewiseLearner> make_expert_c(std::size_t pieces, std::size_t horizon,
                                                IntervalLearnerFactory factory, std::uint64_t seed);
std::unique_ptr<MetaLearner> make_piece_meta(std::span<const std::size_t> grid, std::size_t horizon,
                                             IntervalLearnerFactory factory, const LossSpec& loss,
                                             std::uint64_t seed, MwaMode mode = MwaMode::sampled);

std::unique_ptr<OnlineLearner> make_augmented(const AugmentedConfig& cfg, std::size_t horizon,
                                              const AugmentedParts& parts, std::uint64_t seed);

}  // namespace olr

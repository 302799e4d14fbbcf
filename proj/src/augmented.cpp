#include "olr/augmented.hpp"

#include <cmath>
#include <string>

#include "olr/rng.hpp"

namespace olr {

namespace {

constexpr std::uint64_t kPredictorSeedTag = 0x70726564ULL;

}  // namespace

RestartLearner::RestartLearner(PredictorPtr predictor, TransductiveFactory factory,
                               std::uint64_t seed)
    : predictor_(std::move(predictor)), factory_(std::move(factory)), seed_(seed) {
  if (!predictor_) throw InvalidInput("restart learner needs a predictor");
  if (!factory_) throw InvalidInput("restart learner needs a transductive factory");
}

double RestartLearner::predict(std::span<const double> x) {
  const bool miss = predictor_->observe(x);
  if (round_ == 0 || miss) {
    const auto& forecast = predictor_->forecast();
    std::span<const Point> suffix(forecast.data() + round_, forecast.size() - round_);
    current_ = factory_(suffix, child_seed(seed_, restarts_));
    ++restarts_;
    restart_rounds_.push_back(round_);
  }
  return current_->predict(x);
}

void RestartLearner::reveal(double y) {
  if (!current_) throw ContractViolation("reveal called before predict");
  current_->reveal(y);
  ++round_;
}

IntervalLearnerFactory restart_factory(PredictorFactory predictors, TransductiveFactory inner) {
  return [predictors = std::move(predictors), inner = std::move(inner)](
             std::size_t begin, std::size_t end, std::uint64_t seed) {
    auto pred = predictors(begin, end, derive_seed(seed, kPredictorSeedTag));
    return std::unique_ptr<OnlineLearner>(
        std::make_unique<RestartLearner>(std::move(pred), inner, seed));
  };
}

std::vector<std::pair<std::size_t, std::size_t>> piece_intervals(std::size_t horizon,
                                                                 std::size_t pieces) {
  if (horizon == 0) throw InvalidInput("piece_intervals: horizon must be >= 1");
  if (pieces > horizon - 1) {
    throw InvalidInput("piece count c=" + std::to_string(pieces) + " must lie in [0, T-1] for T=" +
                       std::to_string(horizon));
  }
  const std::size_t step = (horizon + pieces) / (pieces + 1);  // ceil(T / (c + 1))
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t j = 1; j <= pieces + 1; ++j) {
    const std::size_t end = j == pieces + 1 ? horizon : std::min(j * step, horizon);
    if (end > begin) out.emplace_back(begin, end);
    begin = std::max(begin, end);
  }
  return out;
}

PiecewiseLearner::PiecewiseLearner(std::size_t pieces, std::size_t horizon,
                                   IntervalLearnerFactory factory, std::uint64_t seed)
    : intervals_(piece_intervals(horizon, pieces)), factory_(std::move(factory)), seed_(seed) {}

double PiecewiseLearner::predict(std::span<const double> x) {
  if (round_ >= intervals_.back().second) {
    throw ContractViolation("piecewise learner asked for a round past its horizon");
  }
  if (!current_ || round_ == intervals_[piece_].second) {
    if (current_) ++piece_;
    const auto [begin, end] = intervals_[piece_];
    current_ = factory_(begin, end, child_seed(seed_, piece_));
  }
  return current_->predict(x);
}

void PiecewiseLearner::reveal(double y) {
  if (!current_) throw ContractViolation("reveal called before predict");
  current_->reveal(y);
  ++round_;
}

MetaLearner::MetaLearner(std::vector<std::unique_ptr<OnlineLearner>> experts, std::size_t horizon,
                         const LossSpec& loss, std::uint64_t seed, MwaMode mode)
    : experts_(std::move(experts)),
      mwa_([&] {
        if (experts_.empty()) throw EmptyExperts("meta learner needs at least one expert");
        return experts_.size();
      }(),
           horizon, derive_seed(seed, kMetaSeedTag), mode),
      loss_(loss),
      predictions_(experts_.size()),
      losses_(experts_.size()) {
  loss_.validate();
}

double MetaLearner::predict(std::span<const double> x) {
  for (std::size_t i = 0; i < experts_.size(); ++i) predictions_[i] = experts_[i]->predict(x);
  return mwa_.predict(predictions_);
}

void MetaLearner::reveal(double y) {
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    experts_[i]->reveal(y);
    losses_[i] = normalized_loss(loss_, predictions_[i], y);
  }
  mwa_.update(losses_);
}

std::vector<std::size_t> piece_grid(std::size_t horizon, PieceGrid grid,
                                    std::size_t full_grid_limit) {
  if (horizon == 0) throw InvalidInput("piece_grid: horizon must be >= 1");
  if (grid == PieceGrid::automatic) {
    grid = horizon <= full_grid_limit ? PieceGrid::full : PieceGrid::powers_of_two;
  }
  std::vector<std::size_t> out{0};
  if (grid == PieceGrid::full) {
    for (std::size_t c = 1; c < horizon; ++c) out.push_back(c);
  } else {
    for (std::size_t c = 1; c < horizon; c *= 2) out.push_back(c);
  }
  return out;
}

std::vector<double> epsilon_grid(std::size_t horizon, double kappa, double floor) {
  if (horizon == 0) throw InvalidInput("epsilon_grid: horizon must be >= 1");
  if (!(kappa > 0.0)) throw InvalidInput("epsilon_grid: kappa must be positive");
  if (!(floor > 0.0)) throw InvalidInput("epsilon_grid: floor must be positive");
  const double top = std::pow(static_cast<double>(horizon), kappa);
  std::vector<double> out;
  for (int i = static_cast<int>(std::ceil(std::log2(floor))); std::ldexp(1.0, i) < top; ++i) {
    const double eps = std::ldexp(1.0, i);
    if (eps >= floor) out.push_back(eps);
  }
  return out;
}

std::optional<AugmentedKind> parse_augmented_kind(const std::string& name) {
  if (name == "alg2-restart") return AugmentedKind::alg2_restart;
  if (name == "expert-c") return AugmentedKind::expert_c;
  if (name == "alg4-meta") return AugmentedKind::alg4_meta;
  if (name == "alg5-restart-eps") return AugmentedKind::alg5_restart_eps;
  if (name == "alg6-meta-eps") return AugmentedKind::alg6_meta_eps;
  if (name == "eps-grid-meta") return AugmentedKind::eps_grid_meta;
  return std::nullopt;
}

std::string to_string(AugmentedKind kind) {
  switch (kind) {
    case AugmentedKind::alg2_restart: return "alg2-restart";
    case AugmentedKind::expert_c: return "expert-c";
    case AugmentedKind::alg4_meta: return "alg4-meta";
    case AugmentedKind::alg5_restart_eps: return "alg5-restart-eps";
    case AugmentedKind::alg6_meta_eps: return "alg6-meta-eps";
    case AugmentedKind::eps_grid_meta: return "eps-grid-meta";
  }
  return "unknown";
}

void AugmentedConfig::validate(std::size_t horizon) const {
  if (horizon == 0) throw InvalidInput("learner horizon must be >= 1");
  const bool needs_eps =
      kind == AugmentedKind::alg5_restart_eps || kind == AugmentedKind::alg6_meta_eps;
  if (needs_eps && (!epsilon || !(*epsilon > 0.0))) {
    throw InvalidInput(to_string(kind) + " requires a positive learner.epsilon");
  }
  if (kind == AugmentedKind::expert_c) {
    if (!pieces) throw InvalidInput("expert-c requires learner.c");
    if (*pieces > horizon - 1) {
      throw InvalidInput("learner.c must lie in [0, T-1]; got " + std::to_string(*pieces));
    }
  }
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw InvalidInput("learner.eps_grid entries must be positive");
  }
  if (kind == AugmentedKind::eps_grid_meta && eps_grid.empty() &&
      epsilon_grid(horizon, kappa).empty()) {
    throw InvalidInput("eps-grid-meta: empty epsilon grid");
  }
}

std::unique_ptr<RestartLearner> make_alg2(PredictorPtr predictor, TransductiveFactory inner,
                                          std::uint64_t seed) {
  return std::make_unique<RestartLearner>(std::move(predictor), std::move(inner), seed);
}

std::unique_ptr<PiecewiseLearner> make_expert_c(std::size_t pieces, std::size_t horizon,
                                                IntervalLearnerFactory factory,
                                                std::uint64_t seed) {
  return std::make_unique<PiecewiseLearner>(pieces, horizon, std::move(factory), seed);
}

std::unique_ptr<MetaLearner> make_piece_meta(std::span<const std::size_t> grid, std::size_t horizon,
                                             IntervalLearnerFactory factory, const LossSpec& loss,
                                             std::uint64_t seed, MwaMode mode) {
  std::vector<std::unique_ptr<OnlineLearner>> experts;
  experts.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    experts.push_back(make_expert_c(grid[i], horizon, factory, child_seed(seed, i)));
  }
  return std::make_unique<MetaLearner>(std::move(experts), horizon, loss, seed, mode);
}

std::unique_ptr<OnlineLearner> make_augmented(const AugmentedConfig& cfg, std::size_t horizon,
                                              const AugmentedParts& parts, std::uint64_t seed) {
  cfg.validate(horizon);
  const MissCriterion zero_one = MissCriterion::zero_one();
  switch (cfg.kind) {
    case AugmentedKind::alg2_restart:
    case AugmentedKind::alg5_restart_eps: {
      const MissCriterion mode = cfg.kind == AugmentedKind::alg2_restart
                                     ? zero_one
                                     : MissCriterion::eps_ball(*cfg.epsilon);
      auto pred = parts.predictors(mode)(0, horizon, derive_seed(seed, kPredictorSeedTag));
      return make_alg2(std::move(pred), parts.transductive, seed);
    }
    case AugmentedKind::expert_c:
      return make_expert_c(*cfg.pieces, horizon,
                           restart_factory(parts.predictors(zero_one), parts.transductive), seed);
    case AugmentedKind::alg4_meta:
    case AugmentedKind::alg6_meta_eps: {
      const MissCriterion mode = cfg.kind == AugmentedKind::alg4_meta
                                     ? zero_one
                                     : MissCriterion::eps_ball(*cfg.epsilon);
      const auto grid = piece_grid(horizon, cfg.grid, cfg.full_grid_limit);
      return make_piece_meta(grid, horizon, restart_factory(parts.predictors(mode), parts.transductive),
                             parts.loss, seed, cfg.meta_mode);
    }
    case AugmentedKind::eps_grid_meta: {
      const std::vector<double> eps =
          cfg.eps_grid.empty() ? epsilon_grid(horizon, cfg.kappa) : cfg.eps_grid;
      const auto grid = piece_grid(horizon, cfg.grid, cfg.full_grid_limit);
      std::vector<std::unique_ptr<OnlineLearner>> experts;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        auto factory = restart_factory(parts.predictors(MissCriterion::eps_ball(eps[i])),
                                       parts.transductive);
        experts.push_back(make_piece_meta(grid, horizon, std::move(factory), parts.loss,
                                          child_seed(seed, i), cfg.meta_mode));
      }
      return std::make_unique<MetaLearner>(std::move(experts), horizon, parts.loss, seed,
                                           cfg.meta_mode);
    }
  }
  throw InvalidInput("unknown learner kind");
}

}  // namespace olr

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "olr/config.hpp"
#include "olr/learner.hpp"

namespace olr {

/// Seeds of one repetition, all derived from master_seed + rep.
struct RepSeeds {
  std::uint64_t rep = 0;
  std::uint64_t stream = 0;
  std::uint64_t labels = 0;
  std::uint64_t target = 0;
  std::uint64_t learner = 0;
  std::uint64_t predictor = 0;

  static RepSeeds of(std::uint64_t master_seed, std::size_t rep);
};

struct RepOutcome {
  RepSeeds seeds;
  std::vector<double> cum_loss;
  std::vector<double> cum_best;
  std::vector<double> regret;
  double normalization_bound = 1.0;
  std::size_t class_size = 0;
  std::optional<std::size_t> target_index;
  std::size_t best_index = 0;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> experts;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t rounds = 0;
  std::vector<RepOutcome> reps;
  std::vector<double> mean_cum_loss;
  std::vector<double> mean_cum_best;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;
  Json grid;  // piece / epsilon grids the learner ran with
};

/// A labeled stream plus the class and target it was generated with.
struct Instance {
  ExampleSequence sequence;
  FunctionClass cls;
  std::optional<std::size_t> target_index;
};

Instance build_instance(const ExperimentConfig& cfg, const RepSeeds& seeds);

/// max_t max(|y_t - lo|, |y_t - hi|) over the class's label range, or over the
/// range of its traces on the stream when the class is unbounded.
double auto_normalization_bound(const FunctionClass& cls, const ExampleSequence& seq);

LossSpec resolve_loss(const ExperimentConfig& cfg, const FunctionClass& cls,
                      const ExampleSequence& seq);

/// Predictor factory for the configured predictor kind on a known truth.
std::function<PredictorFactory(MissCriterion)> predictor_source(const PredictorConfig& p,
                                                                std::vector<Point> truth,
                                                                std::uint64_t seed);

/// The configured learner. `cls` must outlive it.
std::unique_ptr<OnlineLearner> build_learner(const ExperimentConfig& cfg, const FunctionClass& cls,
                                             const ExampleSequence& seq, const LossSpec& loss,
                                             const RepSeeds& seeds);

RepOutcome run_repetition(const ExperimentConfig& cfg, std::size_t rep);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV: t,mean_cum_loss,mean_cum_best,mean_regret,stderr_regret, then per rep
/// cum_loss_r<i>,regret_r<i> when per_rep is set. Doubles as %.17g.
void write_csv(const ExperimentResult& result, const std::filesystem::path& path, bool per_rep);

/// Resolved config, seeds, grids and normalization bounds.
Json sidecar(const ExperimentResult& result);
void write_sidecar(const ExperimentResult& result, const std::filesystem::path& path);

/// Writes `csv` and `csv` + ".json".
void write_outputs(const ExperimentResult& result, const std::filesystem::path& csv, bool per_rep);

std::string format_double(double v);

/// Sample mean and standard error of the mean (0 for a single value).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(std::span<const double> values);

}  // namespace olr

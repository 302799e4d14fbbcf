#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "olr/augmented.hpp"
#include "olr/classes.hpp"
#include "olr/complexity.hpp"
#include "olr/core.hpp"

namespace olr {

using Json = nlohmann::ordered_json;

struct StreamConfig {
  std::string kind = "lds-sparse";  // lds-sparse, lds-rotation, iid-uniform, rademacher-hard, explicit-csv
  std::size_t d = 8;
  std::size_t c = 4;
  double noise_std = 0.1;
  double spectral_radius = 0.95;
  double init_lo = 0.0;
  double init_hi = 1.0;
  double lo = 0.0;  // iid-uniform range
  double hi = 1.0;
  double angle = 0.3;  // lds-rotation
  double radius = 0.4;
  double phase = 0.0;
  std::string path;  // explicit-csv
  std::optional<Interval> clip;
  // "auto": junta classes draw f* from the net on the stream's support,
  // other classes from the class itself. Otherwise a hypothesis index.
  std::optional<std::size_t> target_index;
  // rademacher-hard
  double alpha = 1.0;
  std::vector<Point> candidates;
  double label_lo = -1.0;
  double label_hi = 1.0;
};

struct ClassConfig {
  std::string kind = "junta";  // junta, bv, ramp, constants, thresholds
  std::size_t d = 8;
  std::size_t c = 4;
  std::string support = "stream";  // stream, all, list
  std::vector<std::size_t> support_list;
  double variation = 1.0;
  std::size_t cells = 4;
  std::size_t steps = 4;
  std::size_t coordinate = 0;
  double slope = 2.0;
  std::size_t count = 5;
  double a_lo = 0.1;
  double a_hi = 0.4;
  std::vector<double> values;
};

struct PredictorConfig {
  std::string kind = "perfect";  // perfect, repeat-last, lds, corrupted, shifted
  std::size_t identification_rounds = 0;  // 0: stream dimension
  double rate = 0.0;
  std::vector<std::size_t> rounds;
  bool explicit_rounds = false;
  double magnitude = 0.25;
  double delta = 0.0;
  Metric metric = Metric::euclidean;
};

struct LearnerConfig {
  std::string kind = "transductive";  // class-mwa, transductive, or an augmented kind
  double alpha = 0.0;
  MwaMode mode = MwaMode::sampled;
  CoverOptions cover;
  AugmentedConfig augmented;
};

struct LossConfig {
  std::optional<double> normalization_bound;  // nullopt: auto
  bool clamp = false;
};

struct ExperimentConfig {
  std::size_t horizon = 1000;
  std::size_t repetitions = 10;
  std::uint64_t master_seed = 1;
  StreamConfig stream;
  ClassConfig cls;
  LearnerConfig learner;
  PredictorConfig predictor;
  LossConfig loss;
  BaselineMode baseline = BaselineMode::final_minimizer_prefix;
  std::string output_path;
};

/// Parses and validates; errors name the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Fully resolved config, suitable for re-running.
Json to_json(const ExperimentConfig& cfg);

Json class_to_json(const ClassConfig& c);
ClassConfig parse_class(const Json& j, const std::string& where = "class");
PredictorConfig parse_predictor(const Json& j, const std::string& where = "predictor");

/// Builds the class described by `c` for a stream of the given points.
FunctionClass build_class(const ClassConfig& c, std::span<const Point> points);

bool is_augmented(const std::string& learner_kind);

}  // namespace olr

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "olr/core.hpp"

namespace olr {

enum class Metric { euclidean, max_abs };

double distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// When a standing forecast entry counts as wrong.
///  - zero_one: entries differ by more than `match_tolerance` in max-abs.
///  - eps_ball: d(forecast, actual) >= epsilon.
struct MissCriterion {
  enum class Kind { zero_one, eps_ball };
  Kind kind = Kind::zero_one;
  double epsilon = 0.0;
  Metric metric = Metric::euclidean;
  double match_tolerance = 1e-9;

  static MissCriterion zero_one() { return {}; }
  static MissCriterion eps_ball(double eps, Metric metric = Metric::euclidean) {
    return {Kind::eps_ball, eps, metric};
  }

  bool is_miss(std::span<const double> forecast, std::span<const double> actual) const;
};

/// A raw forecaster: sees examples one at a time and can propose a full
/// sequence of `horizon` examples. It need not be lazy or consistent; the
/// ForecastingPredictor wrapper enforces both.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual void observe(std::span<const double> x) = 0;
  virtual std::vector<Point> propose(std::size_t horizon) const = 0;
};

/// Lazy, consistent predictor of a length-T example sequence.
///
/// The standing forecast is refreshed from the inner forecaster only when its
/// entry for the newly observed round misses under the laziness criterion. On
/// a refresh the observed prefix is written into the forecast. In zero-one
/// mode a matching entry is overwritten with the observed value, so the
/// prefix always equals what was seen; in eps-ball mode a non-miss leaves the
/// forecast untouched and the prefix is only within epsilon.
class ForecastingPredictor {
 public:
  ForecastingPredictor(std::unique_ptr<Forecaster> inner, std::size_t horizon,
                       MissCriterion laziness);

  /// Reveals x_t for the next round t. Returns true when the forecast held
  /// before this call missed x_t (always false for the first round).
  bool observe(std::span<const double> x);

  const std::vector<Point>& forecast() const { return forecast_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t observed() const { return observed_.size(); }
  const std::vector<Point>& observed_prefix() const { return observed_; }
  const MissCriterion& criterion() const { return laziness_; }
  std::size_t refreshes() const { return refreshes_; }
  std::size_t misses() const { return misses_; }

 private:
  void refresh();

  std::unique_ptr<Forecaster> inner_;
  std::size_t horizon_;
  MissCriterion laziness_;
  std::vector<Point> forecast_;
  std::vector<Point> observed_;
  std::size_t refreshes_ = 0;
  std::size_t misses_ = 0;
};

using PredictorPtr = std::unique_ptr<ForecastingPredictor>;

PredictorPtr lazy_consistent_wrap(std::unique_ptr<Forecaster> inner, std::size_t horizon,
                                  MissCriterion mode);

/// Builds a predictor for the sub-stream [begin, end) of the global stream.
using PredictorFactory =
    std::function<PredictorPtr(std::size_t begin, std::size_t end, std::uint64_t seed)>;

// ---- concrete forecasters -------------------------------------------------

class RepeatLastForecaster final : public Forecaster {
 public:
  explicit RepeatLastForecaster(std::size_t dim) : dim_(dim) {}
  void observe(std::span<const double> x) override;
  std::vector<Point> propose(std::size_t horizon) const override;

 private:
  std::size_t dim_;
  std::vector<Point> seen_;
};

/// Identifies x_{t+1} = A x_t by least squares once `identification_rounds`
/// transitions were observed, restricted to coordinates that were ever
/// nonzero. Until then, or when the regression is rank deficient, it repeats
/// the last example.
class LdsForecaster final : public Forecaster {
 public:
  LdsForecaster(std::size_t dim, std::size_t identification_rounds);
  void observe(std::span<const double> x) override;
  std::vector<Point> propose(std::size_t horizon) const override;

  bool identified() const { return identified_; }
  bool fallback_flagged() const { return fallback_; }
  const Eigen::MatrixXd& estimate() const { return estimate_; }

 private:
  void fit();

  std::size_t dim_;
  std::size_t identification_rounds_;
  std::vector<Point> seen_;
  Eigen::MatrixXd estimate_;
  bool identified_ = false;
  bool fallback_ = false;
};

/// Knows the true stream. Forecasts it exactly except at scheduled rounds,
/// whose entries are pushed by `magnitude` along coordinate 0 until observed.
class CorruptedForecaster final : public Forecaster {
 public:
  CorruptedForecaster(std::vector<Point> truth, std::vector<std::size_t> corrupted_rounds,
                      double magnitude);
  void observe(std::span<const double> x) override;
  std::vector<Point> propose(std::size_t horizon) const override;

 private:
  std::vector<Point> truth_;
  std::vector<bool> corrupted_;
  double magnitude_;
  std::size_t seen_ = 0;
};

/// Knows the true stream; every unobserved entry is offset by `delta` along
/// coordinate 0.
class ShiftedForecaster final : public Forecaster {
 public:
  ShiftedForecaster(std::vector<Point> truth, double delta);
  void observe(std::span<const double> x) override;
  std::vector<Point> propose(std::size_t horizon) const override;

 private:
  std::vector<Point> truth_;
  double delta_;
  std::size_t seen_ = 0;
};

PredictorPtr perfect_predictor(std::vector<Point> truth, MissCriterion mode = {});
PredictorPtr repeat_last_predictor(std::size_t dim, std::size_t horizon, MissCriterion mode = {});
PredictorPtr lds_predictor(std::size_t dim, std::size_t horizon, std::size_t identification_rounds,
                           MissCriterion mode = {});

/// Mistake schedule for corrupted predictors: either explicit 0-based rounds,
/// or an independent per-round probability for rounds 1..T-1.
struct MistakeSchedule {
  double rate = 0.0;
  std::vector<std::size_t> rounds;
  bool explicit_rounds = false;

  static MistakeSchedule at(std::vector<std::size_t> rounds) { return {0.0, std::move(rounds), true}; }
  static MistakeSchedule with_rate(double rho) { return {rho, {}, false}; }

  std::vector<std::size_t> realize(std::size_t horizon, std::uint64_t seed) const;
};

PredictorPtr corrupted_predictor(std::vector<Point> truth, const MistakeSchedule& schedule,
                                 double magnitude, std::uint64_t seed, MissCriterion mode = {});

PredictorPtr shifted_predictor(std::vector<Point> truth, double delta, MissCriterion mode);

// Factories slicing a known truth into sub-stream predictors. Explicit
// schedules use global round indices.
PredictorFactory perfect_factory(std::vector<Point> truth, MissCriterion mode = {});
PredictorFactory corrupted_factory(std::vector<Point> truth, MistakeSchedule schedule,
                                   double magnitude, MissCriterion mode = {});
PredictorFactory shifted_factory(std::vector<Point> truth, double delta, MissCriterion mode);
PredictorFactory lds_factory(std::size_t dim, std::size_t identification_rounds,
                             MissCriterion mode = {});
PredictorFactory repeat_last_factory(std::size_t dim, MissCriterion mode = {});

struct MistakeLog {
  std::size_t zero_one_count = 0;
  std::map<double, std::size_t> eps_ball_counts;
  std::vector<bool> zero_one_flags;  // per round, index 0 always false
};

/// Replays the stream through the predictor and counts pre-observation misses
/// for rounds 2..T under the zero-one metric and every epsilon of the grid.
MistakeLog mistake_metrics(ForecastingPredictor& pred, std::span<const Point> stream,
                           std::span<const double> eps_grid, Metric metric = Metric::euclidean,
                           double match_tolerance = 1e-9);

}  // namespace olr

#include "olr/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "olr/rng.hpp"

namespace olr {

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size()) {
    throw InvalidInput("distance between points of dimension " + std::to_string(a.size()) +
                       " and " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    if (metric == Metric::max_abs) {
      acc = std::max(acc, diff);
    } else {
      acc += diff * diff;
    }
  }
  return metric == Metric::max_abs ? acc : std::sqrt(acc);
}

bool MissCriterion::is_miss(std::span<const double> forecast,
                            std::span<const double> actual) const {
  if (kind == Kind::zero_one) return distance(forecast, actual, Metric::max_abs) > match_tolerance;
  return distance(forecast, actual, metric) >= epsilon;
}

ForecastingPredictor::ForecastingPredictor(std::unique_ptr<Forecaster> inner, std::size_t horizon,
                                           MissCriterion laziness)
    : inner_(std::move(inner)), horizon_(horizon), laziness_(laziness) {
  if (!inner_) throw InvalidInput("predictor needs a forecaster");
  if (horizon_ == 0) throw InvalidInput("predictor horizon must be >= 1");
  if (laziness_.kind == MissCriterion::Kind::eps_ball && !(laziness_.epsilon >= 0.0)) {
    throw InvalidInput("eps-ball laziness needs epsilon >= 0");
  }
  observed_.reserve(horizon_);
}

bool ForecastingPredictor::observe(std::span<const double> x) {
  if (observed_.size() >= horizon_) {
    throw ContractViolation("predictor observed more than its horizon of " +
                            std::to_string(horizon_) + " rounds");
  }
  const std::size_t t = observed_.size();
  bool miss = false;
  if (t > 0) miss = laziness_.is_miss(forecast_[t], x);
  observed_.emplace_back(x.begin(), x.end());
  inner_->observe(x);
  if (t == 0 || miss) {
    if (miss) ++misses_;
    refresh();
  } else if (laziness_.kind == MissCriterion::Kind::zero_one) {
    forecast_[t] = observed_.back();
  }
  return miss;
}

void ForecastingPredictor::refresh() {
  std::vector<Point> next = inner_->propose(horizon_);
  if (next.size() != horizon_) {
    throw ContractViolation("forecaster proposed " + std::to_string(next.size()) +
                            " examples for a horizon of " + std::to_string(horizon_));
  }
  const std::size_t dim = observed_.front().size();
  for (const Point& p : next) {
    if (p.size() != dim) throw ContractViolation("forecaster proposed a point of wrong dimension");
  }
  std::copy(observed_.begin(), observed_.end(), next.begin());
  forecast_ = std::move(next);
  ++refreshes_;
}

PredictorPtr lazy_consistent_wrap(std::unique_ptr<Forecaster> inner, std::size_t horizon,
                                  MissCriterion mode) {
  return std::make_unique<ForecastingPredictor>(std::move(inner), horizon, mode);
}

// ---- forecasters ------------------------------------------------------------

namespace {

std::vector<Point> with_prefix(const std::vector<Point>& seen, std::size_t horizon) {
  std::vector<Point> out;
  out.reserve(horizon);
  for (std::size_t t = 0; t < std::min(horizon, seen.size()); ++t) out.push_back(seen[t]);
  return out;
}

}  // namespace

void RepeatLastForecaster::observe(std::span<const double> x) {
  if (x.size() != dim_) throw InvalidInput("repeat-last forecaster: wrong dimension");
  seen_.emplace_back(x.begin(), x.end());
}

std::vector<Point> RepeatLastForecaster::propose(std::size_t horizon) const {
  std::vector<Point> out = with_prefix(seen_, horizon);
  const Point last = seen_.empty() ? Point(dim_, 0.0) : seen_.back();
  while (out.size() < horizon) out.push_back(last);
  return out;
}

LdsForecaster::LdsForecaster(std::size_t dim, std::size_t identification_rounds)
    : dim_(dim), identification_rounds_(std::max<std::size_t>(identification_rounds, 1)) {
  if (dim_ == 0) throw InvalidInput("lds forecaster: dimension must be >= 1");
}

void LdsForecaster::observe(std::span<const double> x) {
  if (x.size() != dim_) throw InvalidInput("lds forecaster: wrong dimension");
  Point p(x.begin(), x.end());
  bool surprised = !identified_;
  if (identified_) {
    const Eigen::Map<const Eigen::VectorXd> prev(seen_.back().data(),
                                                 static_cast<Eigen::Index>(dim_));
    const Eigen::VectorXd guess = estimate_ * prev;
    for (std::size_t i = 0; i < dim_ && !surprised; ++i) {
      surprised = std::abs(guess[static_cast<Eigen::Index>(i)] - p[i]) > 1e-9;
    }
  }
  seen_.push_back(std::move(p));
  if (surprised && seen_.size() >= identification_rounds_ + 1) fit();
}

void LdsForecaster::fit() {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (const Point& p : seen_) {
      if (p[i] != 0.0) {
        support.push_back(i);
        break;
      }
    }
  }
  const auto s = static_cast<Eigen::Index>(support.size());
  const auto n = static_cast<Eigen::Index>(seen_.size() - 1);
  estimate_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                    static_cast<Eigen::Index>(dim_));
  if (s == 0) {
    identified_ = true;
    fallback_ = false;
    return;
  }
  Eigen::MatrixXd from(n, s), to(n, s);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < s; ++j) {
      from(t, j) = seen_[static_cast<std::size_t>(t)][support[static_cast<std::size_t>(j)]];
      to(t, j) = seen_[static_cast<std::size_t>(t + 1)][support[static_cast<std::size_t>(j)]];
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(from);
  qr.setThreshold(1e-10);
  if (qr.rank() < s) {
    identified_ = false;
    fallback_ = true;
    return;
  }
  const Eigen::MatrixXd at = qr.solve(to);  // A restricted to the support, transposed
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      estimate_(static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)]),
                static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)])) = at(j, i);
    }
  }
  identified_ = true;
  fallback_ = false;
}

std::vector<Point> LdsForecaster::propose(std::size_t horizon) const {
  std::vector<Point> out = with_prefix(seen_, horizon);
  if (!identified_) {
    const Point last = seen_.empty() ? Point(dim_, 0.0) : seen_.back();
    while (out.size() < horizon) out.push_back(last);
    return out;
  }
  Eigen::VectorXd state = Eigen::Map<const Eigen::VectorXd>(seen_.back().data(),
                                                            static_cast<Eigen::Index>(dim_));
  while (out.size() < horizon) {
    state = estimate_ * state;
    out.emplace_back(state.data(), state.data() + state.size());
  }
  return out;
}

CorruptedForecaster::CorruptedForecaster(std::vector<Point> truth,
                                         std::vector<std::size_t> corrupted_rounds,
                                         double magnitude)
    : truth_(std::move(truth)), corrupted_(truth_.size(), false), magnitude_(magnitude) {
  for (std::size_t t : corrupted_rounds) {
    if (t >= truth_.size()) throw InvalidInput("corrupted round outside the stream");
    corrupted_[t] = true;
  }
}

void CorruptedForecaster::observe(std::span<const double>) { ++seen_; }

std::vector<Point> CorruptedForecaster::propose(std::size_t horizon) const {
  if (horizon > truth_.size()) throw InvalidInput("corrupted forecaster: horizon past the truth");
  std::vector<Point> out(truth_.begin(), truth_.begin() + static_cast<std::ptrdiff_t>(horizon));
  for (std::size_t t = seen_; t < horizon; ++t) {
    if (corrupted_[t]) out[t][0] += magnitude_;
  }
  return out;
}

ShiftedForecaster::ShiftedForecaster(std::vector<Point> truth, double delta)
    : truth_(std::move(truth)), delta_(delta) {}

void ShiftedForecaster::observe(std::span<const double>) { ++seen_; }

std::vector<Point> ShiftedForecaster::propose(std::size_t horizon) const {
  if (horizon > truth_.size()) throw InvalidInput("shifted forecaster: horizon past the truth");
  std::vector<Point> out(truth_.begin(), truth_.begin() + static_cast<std::ptrdiff_t>(horizon));
  for (std::size_t t = seen_; t < horizon; ++t) out[t][0] += delta_;
  return out;
}

// ---- builders ---------------------------------------------------------------

std::vector<std::size_t> MistakeSchedule::realize(std::size_t horizon, std::uint64_t seed) const {
  std::vector<std::size_t> out;
  if (explicit_rounds) {
    std::set<std::size_t> unique(rounds.begin(), rounds.end());
    for (std::size_t t : unique) {
      if (t >= 1 && t < horizon) out.push_back(t);
    }
    return out;
  }
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidInput("mistake rate must lie in [0, 1]");
  Rng rng(seed);
  for (std::size_t t = 1; t < horizon; ++t) {
    if (rng.uniform() < rate) out.push_back(t);
  }
  return out;
}

namespace {

std::vector<Point> slice(const std::vector<Point>& truth, std::size_t begin, std::size_t end) {
  if (begin >= end || end > truth.size()) throw InvalidInput("predictor slice out of range");
  return {truth.begin() + static_cast<std::ptrdiff_t>(begin),
          truth.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace

PredictorPtr perfect_predictor(std::vector<Point> truth, MissCriterion mode) {
  const std::size_t horizon = truth.size();
  return lazy_consistent_wrap(std::make_unique<ShiftedForecaster>(std::move(truth), 0.0), horizon,
                              mode);
}

PredictorPtr repeat_last_predictor(std::size_t dim, std::size_t horizon, MissCriterion mode) {
  return lazy_consistent_wrap(std::make_unique<RepeatLastForecaster>(dim), horizon, mode);
}

PredictorPtr lds_predictor(std::size_t dim, std::size_t horizon, std::size_t identification_rounds,
                           MissCriterion mode) {
  return lazy_consistent_wrap(std::make_unique<LdsForecaster>(dim, identification_rounds),
                              horizon, mode);
}

PredictorPtr corrupted_predictor(std::vector<Point> truth, const MistakeSchedule& schedule,
                                 double magnitude, std::uint64_t seed, MissCriterion mode) {
  const std::size_t horizon = truth.size();
  auto rounds = schedule.realize(horizon, seed);
  return lazy_consistent_wrap(
      std::make_unique<CorruptedForecaster>(std::move(truth), std::move(rounds), magnitude),
      horizon, mode);
}

PredictorPtr shifted_predictor(std::vector<Point> truth, double delta, MissCriterion mode) {
  const std::size_t horizon = truth.size();
  return lazy_consistent_wrap(std::make_unique<ShiftedForecaster>(std::move(truth), delta),
                              horizon, mode);
}

PredictorFactory perfect_factory(std::vector<Point> truth, MissCriterion mode) {
  return [truth = std::move(truth), mode](std::size_t begin, std::size_t end, std::uint64_t) {
    return perfect_predictor(slice(truth, begin, end), mode);
  };
}

PredictorFactory corrupted_factory(std::vector<Point> truth, MistakeSchedule schedule,
                                   double magnitude, MissCriterion mode) {
  return [truth = std::move(truth), schedule = std::move(schedule), magnitude, mode](
             std::size_t begin, std::size_t end, std::uint64_t seed) {
    MistakeSchedule local = schedule;
    if (schedule.explicit_rounds) {
      local.rounds.clear();
      for (std::size_t t : schedule.rounds) {
        if (t > begin && t < end) local.rounds.push_back(t - begin);
      }
    }
    return corrupted_predictor(slice(truth, begin, end), local, magnitude, seed, mode);
  };
}

PredictorFactory shifted_factory(std::vector<Point> truth, double delta, MissCriterion mode) {
  return [truth = std::move(truth), delta, mode](std::size_t begin, std::size_t end,
                                                 std::uint64_t) {
    return shifted_predictor(slice(truth, begin, end), delta, mode);
  };
}

PredictorFactory lds_factory(std::size_t dim, std::size_t identification_rounds,
                             MissCriterion mode) {
  return [dim, identification_rounds, mode](std::size_t begin, std::size_t end, std::uint64_t) {
    return lds_predictor(dim, end - begin, identification_rounds, mode);
  };
}

PredictorFactory repeat_last_factory(std::size_t dim, MissCriterion mode) {
  return [dim, mode](std::size_t begin, std::size_t end, std::uint64_t) {
    return repeat_last_predictor(dim, end - begin, mode);
  };
}

MistakeLog mistake_metrics(ForecastingPredictor& pred, std::span<const Point> stream,
                           std::span<const double> eps_grid, Metric metric,
                           double match_tolerance) {
  MistakeLog log;
  log.zero_one_flags.assign(stream.size(), false);
  for (double eps : eps_grid) log.eps_ball_counts[eps] = 0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    if (t > 0) {
      const Point& entry = pred.forecast()[t];
      if (distance(entry, stream[t], Metric::max_abs) > match_tolerance) {
        ++log.zero_one_count;
        log.zero_one_flags[t] = true;
      }
      const double d = distance(entry, stream[t], metric);
      for (double eps : eps_grid) {
        if (d >= eps) ++log.eps_ball_counts[eps];
      }
    }
    pred.observe(stream[t]);
  }
  return log;
}

}  // namespace olr

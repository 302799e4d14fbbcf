#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "olr/classes.hpp"
#include "olr/complexity.hpp"
#include "olr/learner.hpp"
#include "olr/mwa.hpp"

namespace olr {

struct TransductiveOptions {
  double alpha = 0.0;  // 0: experts are the deduplicated class traces
  CoverOptions cover;  // greedy, midrange centers by default
  MwaMode mode = MwaMode::sampled;
  LossSpec loss;
};

/// Transductive learner: the example sequence is known up front, an
/// l-infinity alpha-cover of the class on it becomes the expert set, and
/// exponential weights run over those experts as labels arrive.
///
/// The learner indexes experts by round; the x handed to predict() is not
/// consulted, so a learner built on a forecast keeps using the forecast.
class TransductiveLearner final : public OnlineLearner {
 public:
  TransductiveLearner(const FunctionClass& cls, std::span<const Point> known,
                      const TransductiveOptions& options, std::uint64_t seed);
  /// Reuses an expert table built earlier (e.g. shared across seeds).
  TransductiveLearner(ExpertTable table, const TransductiveOptions& options, std::uint64_t seed);

  double predict(std::span<const double> x) override;
  void reveal(double y) override;

  std::size_t experts() const { return table_.experts(); }
  std::size_t horizon() const { return table_.rounds(); }
  const ExpertTable& table() const { return table_; }
  const Mwa& engine() const { return mwa_; }
  bool cover_exact() const { return cover_exact_; }

 private:
  bool cover_exact_ = false;  // set while table_ is built, so declared first
  ExpertTable table_;
  Mwa mwa_;
  LossSpec loss_;
  std::size_t round_ = 0;
  bool awaiting_label_ = false;
};

/// Builds the expert table used by TransductiveLearner.
ExpertTable transductive_experts(const FunctionClass& cls, std::span<const Point> known,
                                 double alpha, const CoverOptions& cover, bool* exact = nullptr);

/// Plain online MWA over every hypothesis of the class, evaluated on x_t as it
/// arrives. This is the no-side-information baseline.
class ClassMwaLearner final : public OnlineLearner {
 public:
  ClassMwaLearner(const FunctionClass& cls, std::size_t horizon, const LossSpec& loss,
                  std::uint64_t seed, MwaMode mode = MwaMode::sampled);

  double predict(std::span<const double> x) override;
  void reveal(double y) override;

  std::size_t experts() const { return cls_->size(); }

 private:
  const FunctionClass* cls_;
  Mwa mwa_;
  LossSpec loss_;
  std::vector<double> current_;
  std::vector<double> scratch_;
};

/// Factory used by the restart learners: a transductive learner on a known
/// (forecast) sequence. The horizon is the sequence length.
using TransductiveFactory =
    std::function<std::unique_ptr<OnlineLearner>(std::span<const Point> known, std::uint64_t seed)>;

TransductiveFactory make_transductive_factory(const FunctionClass& cls,
                                              const TransductiveOptions& options);

/// alpha L T + sqrt(T ln K / 2).
double transductive_regret_bound(double horizon, double experts, double alpha,
                                 double loss_lipschitz);

}  // namespace olr

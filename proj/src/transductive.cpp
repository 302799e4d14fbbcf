#include "olr/transductive.hpp"

#include <cmath>
#include <string>

namespace olr {

ExpertTable transductive_experts(const FunctionClass& cls, std::span<const Point> known,
                                 double alpha, const CoverOptions& cover, bool* exact) {
  if (cls.empty()) throw EmptyClass("transductive learner: empty function class");
  if (known.empty()) throw InvalidInput("transductive learner: empty known sequence");
  CoverResult r = covering_number_linf(cls, known, alpha, cover);
  if (r.size == 0) throw EmptyExperts("transductive learner: cover produced no experts");
  if (exact) *exact = r.exact;
  return std::move(r.centers);
}

TransductiveLearner::TransductiveLearner(const FunctionClass& cls, std::span<const Point> known,
                                         const TransductiveOptions& options, std::uint64_t seed)
    : table_(transductive_experts(cls, known, options.alpha, options.cover, &cover_exact_)),
      mwa_(table_.experts(), table_.rounds(), seed, options.mode),
      loss_(options.loss) {
  loss_.validate();
}

TransductiveLearner::TransductiveLearner(ExpertTable table, const TransductiveOptions& options,
                                         std::uint64_t seed)
    : table_(std::move(table)),
      mwa_(table_.experts(), table_.rounds(), seed, options.mode),
      loss_(options.loss) {
  loss_.validate();
}

double TransductiveLearner::predict(std::span<const double>) {
  if (awaiting_label_) throw ContractViolation("predict called twice without reveal");
  if (round_ >= table_.rounds()) {
    throw ContractViolation("transductive learner asked for round " + std::to_string(round_ + 1) +
                            " past its horizon " + std::to_string(table_.rounds()));
  }
  awaiting_label_ = true;
  return mwa_.predict(table_.round(round_));
}

void TransductiveLearner::reveal(double y) {
  if (!awaiting_label_) throw ContractViolation("reveal called before predict");
  const auto preds = table_.round(round_);
  std::vector<double> losses(preds.size());
  for (std::size_t k = 0; k < preds.size(); ++k) losses[k] = normalized_loss(loss_, preds[k], y);
  mwa_.update(losses);
  awaiting_label_ = false;
  ++round_;
}

ClassMwaLearner::ClassMwaLearner(const FunctionClass& cls, std::size_t horizon,
                                 const LossSpec& loss, std::uint64_t seed, MwaMode mode)
    : cls_(&cls),
      mwa_([&] {
        if (cls.empty()) throw EmptyClass("class learner: empty function class");
        return cls.size();
      }(),
           horizon, seed, mode),
      loss_(loss) {
  loss_.validate();
  current_.resize(cls.size());
  scratch_.resize(cls.size());
}

double ClassMwaLearner::predict(std::span<const double> x) {
  for (std::size_t k = 0; k < cls_->size(); ++k) current_[k] = cls_->eval(k, x);
  return mwa_.predict(current_);
}

void ClassMwaLearner::reveal(double y) {
  for (std::size_t k = 0; k < current_.size(); ++k) {
    scratch_[k] = normalized_loss(loss_, current_[k], y);
  }
  mwa_.update(scratch_);
}

TransductiveFactory make_transductive_factory(const FunctionClass& cls,
                                              const TransductiveOptions& options) {
  return [&cls, options](std::span<const Point> known, std::uint64_t seed) {
    return std::make_unique<TransductiveLearner>(cls, known, options, seed);
  };
}

double transductive_regret_bound(double horizon, double experts, double alpha,
                                 double loss_lipschitz) {
  return alpha * loss_lipschitz * horizon + std::sqrt(horizon * std::log(experts) / 2.0);
}

}  // namespace olr

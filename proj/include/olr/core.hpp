#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace olr {

using Point = std::vector<double>;

// Error families. Everything derives from std::exception so callers can catch
// broadly; the harness maps them to exit codes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyClass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyExperts : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LabeledExample {
  Point x;
  double y = 0.0;
};

/// Ordered stream of labeled examples sharing one dimension. T >= 1.
class ExampleSequence {
 public:
  ExampleSequence() = default;
  explicit ExampleSequence(std::vector<LabeledExample> examples);
  ExampleSequence(const std::vector<Point>& points, std::span<const double> labels);

  std::size_t size() const { return examples_.size(); }
  std::size_t dim() const { return examples_.empty() ? 0 : examples_.front().x.size(); }
  bool empty() const { return examples_.empty(); }

  const LabeledExample& operator[](std::size_t t) const { return examples_[t]; }
  const std::vector<LabeledExample>& examples() const { return examples_; }

  std::vector<Point> points() const;
  std::vector<double> labels() const;

 private:
  std::vector<LabeledExample> examples_;
};

enum class LossKind { l1, custom };

/// Loss configuration. Losses are divided by normalization_bound before they
/// reach a multiplicative-weights engine, which requires values in [0, 1].
struct LossSpec {
  LossKind kind = LossKind::l1;
  double lipschitz_constant = 1.0;
  double normalization_bound = 1.0;
  // Clamp normalized losses into [0, 1] instead of raising a contract error.
  bool clamp_normalized = false;
  std::function<double(double, double)> custom;

  static LossSpec l1(double normalization_bound = 1.0);
  void validate() const;
};

double loss(const LossSpec& spec, double y_hat, double y);

/// loss / normalization_bound, checked against [0, 1] within 1e-12.
double normalized_loss(const LossSpec& spec, double y_hat, double y);

class FunctionClass;

struct BestInClass {
  double loss = 0.0;
  std::size_t index = 0;
};

BestInClass best_in_class_loss(const FunctionClass& cls, const ExampleSequence& seq,
                               const LossSpec& spec);

enum class BaselineMode { final_minimizer_prefix, prefix_best };

struct RegretReport {
  std::vector<double> cumulative_learner_loss;
  std::vector<double> best_in_class_loss;
  std::vector<double> regret;
  std::size_t best_index = 0;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;

  double final_regret() const { return regret.empty() ? 0.0 : regret.back(); }
};

RegretReport accumulate_regret(std::span<const double> learner_losses, const FunctionClass& cls,
                               const ExampleSequence& seq, const LossSpec& spec,
                               BaselineMode mode = BaselineMode::final_minimizer_prefix);

// Prefix sums; out[t] = sum of values[0..t].
std::vector<double> cumulative(std::span<const double> values);

}  // namespace olr

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "olr/core.hpp"

namespace olr {

/// Round protocol shared by every learner: predict(x_t) returns y_hat_t, then
/// reveal(y_t). Nothing else about the stream is ever handed to a learner.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual double predict(std::span<const double> x) = 0;
  virtual void reveal(double y) = 0;
};

struct RunTrace {
  std::vector<double> predictions;
  std::vector<double> losses;
};

/// Plays the whole sequence through the learner.
RunTrace run_online(OnlineLearner& learner, const ExampleSequence& seq, const LossSpec& spec);

}  // namespace olr

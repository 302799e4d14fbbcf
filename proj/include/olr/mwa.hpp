#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "olr/rng.hpp"

namespace olr {

enum class MwaMode {
  sampled,   // follow one expert drawn proportionally to the weights
  averaged,  // weighted mean of the expert predictions (loss must be convex)
};

/// Exponential weights over a fixed set of K experts with horizon T.
///
/// Weights live in log space and are shifted so the largest log-weight is 0
/// after every update, so long horizons never underflow. The learning rate is
/// sqrt(8 ln K / T) for K >= 2 and 0 for a lone expert; against losses in
/// [0, 1] this gives expected regret at most sqrt(T ln K / 2).
class Mwa {
 public:
  Mwa(std::size_t experts, std::size_t horizon, std::uint64_t seed,
      MwaMode mode = MwaMode::sampled);

  static double default_eta(std::size_t experts, std::size_t horizon);

  double predict(std::span<const double> expert_predictions);
  void update(std::span<const double> normalized_losses);

  /// Current probability vector (sums to 1).
  const std::vector<double>& distribution() const { return probabilities_; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  std::size_t size() const { return log_weights_.size(); }
  std::size_t horizon() const { return horizon_; }
  std::size_t round() const { return round_; }
  double eta() const { return eta_; }
  MwaMode mode() const { return mode_; }
  // Index drawn by the latest sampled prediction.
  std::size_t last_choice() const { return last_choice_; }

 private:
  void refresh_probabilities();

  std::vector<double> log_weights_;
  std::vector<double> probabilities_;
  std::vector<std::size_t> order_;  // scratch for order-independent averaging
  std::vector<double> scratch_;
  std::size_t horizon_;
  double eta_;
  MwaMode mode_;
  Rng rng_;
  std::size_t round_ = 0;
  std::size_t last_choice_ = 0;
};

}  // namespace olr

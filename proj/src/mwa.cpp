#include "olr/mwa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "olr/core.hpp"

namespace olr {

double Mwa::default_eta(std::size_t experts, std::size_t horizon) {
  if (experts <= 1) return 0.0;
  return std::sqrt(8.0 * std::log(static_cast<double>(experts)) / static_cast<double>(horizon));
}

Mwa::Mwa(std::size_t experts, std::size_t horizon, std::uint64_t seed, MwaMode mode)
    : horizon_(horizon), eta_(0.0), mode_(mode), rng_(seed) {
  if (experts == 0) throw EmptyExperts("multiplicative weights needs at least one expert");
  if (horizon == 0) throw InvalidInput("multiplicative weights horizon must be >= 1");
  eta_ = default_eta(experts, horizon);
  log_weights_.assign(experts, 0.0);
  probabilities_.assign(experts, 1.0 / static_cast<double>(experts));
  if (mode_ == MwaMode::averaged) {
    order_.resize(experts);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }
}

double Mwa::predict(std::span<const double> expert_predictions) {
  if (expert_predictions.size() != size()) {
    throw InvalidInput("mwa predict: got " + std::to_string(expert_predictions.size()) +
                       " predictions for " + std::to_string(size()) + " experts");
  }
  const std::size_t k_count = size();
  if (k_count == 1) {
    last_choice_ = 0;
    return expert_predictions[0];
  }
  if (mode_ == MwaMode::sampled) {
    const double u = rng_.uniform();
    double acc = 0.0;
    std::size_t pick = k_count - 1;
    for (std::size_t k = 0; k < k_count; ++k) {
      acc += probabilities_[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    last_choice_ = pick;
    return expert_predictions[pick];
  }
  // Sum in a canonical order so a permutation of experts gives the same bits.
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    if (probabilities_[a] != probabilities_[b]) return probabilities_[a] < probabilities_[b];
    return expert_predictions[a] < expert_predictions[b];
  });
  double mean = 0.0;
  for (std::size_t k : order_) mean += probabilities_[k] * expert_predictions[k];
  return mean;
}

void Mwa::update(std::span<const double> normalized_losses) {
  if (normalized_losses.size() != size()) {
    throw InvalidInput("mwa update: got " + std::to_string(normalized_losses.size()) +
                       " losses for " + std::to_string(size()) + " experts");
  }
  for (double l : normalized_losses) {
    if (!(l >= -1e-12 && l <= 1.0 + 1e-12)) {
      throw ContractViolation("mwa update: loss " + std::to_string(l) + " outside [0, 1]");
    }
  }
  for (std::size_t k = 0; k < size(); ++k) log_weights_[k] -= eta_ * normalized_losses[k];
  ++round_;
  refresh_probabilities();
}

void Mwa::refresh_probabilities() {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& lw : log_weights_) lw -= top;
  for (std::size_t k = 0; k < size(); ++k) probabilities_[k] = std::exp(log_weights_[k]);
  double total = 0.0;
  if (mode_ == MwaMode::averaged) {
    // Canonical-order normalizer keeps the averaged output permutation invariant.
    scratch_.assign(probabilities_.begin(), probabilities_.end());
    std::sort(scratch_.begin(), scratch_.end());
    for (double p : scratch_) total += p;
  } else {
    for (double p : probabilities_) total += p;
  }
  for (double& p : probabilities_) p /= total;
}

}  // namespace olr

#include "olr/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "olr/classes.hpp"
#include "olr/learner.hpp"

namespace olr {

ExampleSequence::ExampleSequence(std::vector<LabeledExample> examples)
    : examples_(std::move(examples)) {
  if (examples_.empty()) throw InvalidInput("example sequence must contain at least one round");
  const std::size_t d = examples_.front().x.size();
  if (d == 0) throw InvalidInput("examples must have dimension >= 1");
  for (std::size_t t = 0; t < examples_.size(); ++t) {
    if (examples_[t].x.size() != d) {
      throw InvalidInput("example " + std::to_string(t + 1) + " has dimension " +
                         std::to_string(examples_[t].x.size()) + ", expected " +
                         std::to_string(d));
    }
  }
}

ExampleSequence::ExampleSequence(const std::vector<Point>& points, std::span<const double> labels)
    : ExampleSequence([&] {
        if (points.size() != labels.size()) {
          throw InvalidInput("points and labels differ in length");
        }
        std::vector<LabeledExample> out;
        out.reserve(points.size());
        for (std::size_t t = 0; t < points.size(); ++t) out.push_back({points[t], labels[t]});
        return out;
      }()) {}

std::vector<Point> ExampleSequence::points() const {
  std::vector<Point> out;
  out.reserve(examples_.size());
  for (const auto& e : examples_) out.push_back(e.x);
  return out;
}

std::vector<double> ExampleSequence::labels() const {
  std::vector<double> out;
  out.reserve(examples_.size());
  for (const auto& e : examples_) out.push_back(e.y);
  return out;
}

LossSpec LossSpec::l1(double normalization_bound) {
  LossSpec spec;
  spec.normalization_bound = normalization_bound;
  return spec;
}

void LossSpec::validate() const {
  if (!(lipschitz_constant > 0.0) || !std::isfinite(lipschitz_constant)) {
    throw InvalidInput("loss.lipschitz_constant must be positive and finite");
  }
  if (!(normalization_bound > 0.0) || !std::isfinite(normalization_bound)) {
    throw InvalidInput("loss.normalization_bound must be positive and finite");
  }
  if (kind == LossKind::l1 && lipschitz_constant != 1.0) {
    throw InvalidInput("loss.lipschitz_constant must be 1 for the l1 loss");
  }
  if (kind == LossKind::custom && !custom) {
    throw InvalidInput("custom loss requires a loss function");
  }
}

double loss(const LossSpec& spec, double y_hat, double y) {
  if (!std::isfinite(y_hat) || !std::isfinite(y)) {
    throw InvalidInput("loss: non-finite input");
  }
  double value = spec.kind == LossKind::l1 ? std::abs(y_hat - y) : spec.custom(y_hat, y);
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidInput("loss: custom loss returned a negative or non-finite value");
  }
  return value;
}

double normalized_loss(const LossSpec& spec, double y_hat, double y) {
  double v = loss(spec, y_hat, y) / spec.normalization_bound;
  if (v > 1.0) {
    if (!spec.clamp_normalized && v > 1.0 + 1e-12) {
      throw ContractViolation("normalized loss " + std::to_string(v) +
                              " exceeds 1; raise loss.normalization_bound");
    }
    v = 1.0;
  }
  return v;
}

std::vector<double> cumulative(std::span<const double> values) {
  std::vector<double> out(values.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    acc += values[t];
    out[t] = acc;
  }
  return out;
}

namespace {

// Per-hypothesis per-round losses, hypothesis-major.
std::vector<double> hypothesis_losses(const FunctionClass& cls, const ExampleSequence& seq,
                                      const LossSpec& spec) {
  const std::size_t n = seq.size();
  std::vector<double> out(cls.size() * n);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      out[k * n + t] = loss(spec, cls.eval(k, seq[t].x), seq[t].y);
    }
  }
  return out;
}

}  // namespace

BestInClass best_in_class_loss(const FunctionClass& cls, const ExampleSequence& seq,
                               const LossSpec& spec) {
  if (cls.empty()) throw EmptyClass("best_in_class_loss: empty function class");
  BestInClass best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < cls.size(); ++k) {
    double total = 0.0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      total += loss(spec, cls.eval(k, seq[t].x), seq[t].y);
    }
    if (total < best.loss) best = {total, k};
  }
  return best;
}

RegretReport accumulate_regret(std::span<const double> learner_losses, const FunctionClass& cls,
                               const ExampleSequence& seq, const LossSpec& spec,
                               BaselineMode mode) {
  if (learner_losses.size() != seq.size()) {
    throw InvalidInput("accumulate_regret: " + std::to_string(learner_losses.size()) +
                       " learner losses for " + std::to_string(seq.size()) + " rounds");
  }
  if (cls.empty()) throw EmptyClass("accumulate_regret: empty function class");
  const std::size_t n = seq.size();
  const std::vector<double> per = hypothesis_losses(cls, seq, spec);

  RegretReport report;
  report.cumulative_learner_loss = cumulative(learner_losses);
  report.best_in_class_loss.assign(n, 0.0);

  if (mode == BaselineMode::final_minimizer_prefix) {
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cls.size(); ++k) {
      double total = 0.0;
      for (std::size_t t = 0; t < n; ++t) total += per[k * n + t];
      if (total < best_total) {
        best_total = total;
        report.best_index = k;
      }
    }
    report.best_in_class_loss =
        cumulative(std::span<const double>(per.data() + report.best_index * n, n));
  } else {
    std::vector<double> running(cls.size(), 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < cls.size(); ++k) {
        running[k] += per[k * n + t];
        if (running[k] < best) {
          best = running[k];
          if (t + 1 == n) report.best_index = k;
        }
      }
      report.best_in_class_loss[t] = best;
    }
  }

  report.regret.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    report.regret[t] = report.cumulative_learner_loss[t] - report.best_in_class_loss[t];
  }
  return report;
}

RunTrace run_online(OnlineLearner& learner, const ExampleSequence& seq, const LossSpec& spec) {
  RunTrace trace;
  trace.predictions.reserve(seq.size());
  trace.losses.reserve(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const double y_hat = learner.predict(seq[t].x);
    learner.reveal(seq[t].y);
    trace.predictions.push_back(y_hat);
    trace.losses.push_back(loss(spec, y_hat, seq[t].y));
  }
  return trace;
}

}  // namespace olr

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "olr/core.hpp"

namespace olr {

struct Constant {
  double value = 0.0;
};

/// f(x) = w . x with w supported on at most c coordinates. `scaled` holds the
/// grid coefficients as exact integers (coefficient * scale) for dedup.
struct JuntaHyperplane {
  std::vector<double> weights;
  std::vector<int> scaled;
};

/// 0 below a, 1 above b, linear in between. Slope 1 / (b - a).
struct Ramp {
  double a = 0.0;
  double b = 1.0;
  std::size_t coordinate = 0;
};

/// Step function on one coordinate: value[i] where i counts the breakpoints
/// that are <= x. values.size() == breakpoints.size() + 1.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
  std::size_t coordinate = 0;
  double total_variation = 0.0;
};

/// Lookup table over explicit points; evaluation outside the table throws.
struct ExplicitTable {
  std::vector<Point> points;
  std::vector<double> values;
};

using Hypothesis = std::variant<Constant, JuntaHyperplane, Ramp, PiecewiseConstant, ExplicitTable>;

double evaluate(const Hypothesis& h, std::span<const double> x);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double v, double tol = 1e-12) const { return v >= lo - tol && v <= hi + tol; }
};

inline constexpr double kNotLipschitz = std::numeric_limits<double>::infinity();

/// A finite, enumerable hypothesis set over d-dimensional inputs.
class FunctionClass {
 public:
  FunctionClass() = default;
  FunctionClass(std::vector<Hypothesis> hypotheses, std::size_t domain_dim, Interval label_range,
                double lipschitz_constant = kNotLipschitz, std::string name = {});

  std::size_t size() const { return hypotheses_.size(); }
  bool empty() const { return hypotheses_.empty(); }
  std::size_t domain_dim() const { return domain_dim_; }
  const Interval& label_range() const { return label_range_; }
  double lipschitz_constant() const { return lipschitz_; }
  const std::string& name() const { return name_; }

  const Hypothesis& operator[](std::size_t k) const { return hypotheses_[k]; }
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }

  /// Checked evaluation of hypothesis k (dimension mismatch -> InvalidInput).
  double eval(std::size_t k, std::span<const double> x) const;

  /// Trace matrix: out[k * n + t] = f_k(points[t]).
  std::vector<double> traces(std::span<const Point> points) const;

  /// Union keeping the first occurrence of duplicated junta weight vectors.
  FunctionClass merged_with(const FunctionClass& other) const;

 private:
  std::vector<Hypothesis> hypotheses_;
  std::size_t domain_dim_ = 1;
  Interval label_range_;
  double lipschitz_ = kNotLipschitz;
  std::string name_;
};

/// Coefficient grid used by the junta experiment: -1 + 0.4 i for i = 1..5.
std::vector<double> junta_coefficient_grid();

/// All c-junta hyperplanes with grid coefficients. With `support`, only that
/// support (5^c hypotheses); otherwise the union over all C(d, c) supports.
FunctionClass appendix_class(std::size_t d, std::size_t c,
                             std::optional<std::vector<std::size_t>> support = std::nullopt);

/// Piecewise-constant functions on `cells` equal cells of [0, 1] with values
/// j / value_steps, keeping those with total variation <= max_variation.
FunctionClass bv_class(double max_variation, std::size_t cells, std::size_t value_steps,
                       std::size_t domain_dim = 1, std::size_t coordinate = 0);

/// Ramps of slope `slope` with left ends a_i = lo + i (hi - lo) / (count - 1).
FunctionClass ramp_class(double slope, std::size_t count, double a_lo, double a_hi,
                         std::size_t domain_dim = 1, std::size_t coordinate = 0);

FunctionClass constant_class(std::span<const double> values, std::size_t domain_dim = 1);

/// Indicators 1[x >= theta] over the given thresholds.
FunctionClass threshold_class(std::span<const double> thresholds);

/// Explicit-table class from rows of values on shared points.
FunctionClass table_class(std::vector<Point> points, const std::vector<std::vector<double>>& rows);

}  // namespace olr

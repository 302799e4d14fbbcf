#include "olr/classes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace olr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double coordinate_of(std::span<const double> x, std::size_t coordinate) {
  if (coordinate >= x.size()) {
    throw InvalidInput("hypothesis reads coordinate " + std::to_string(coordinate) +
                       " of a " + std::to_string(x.size()) + "-dimensional input");
  }
  return x[coordinate];
}

// Coefficients of the junta grid as integers over this denominator.
constexpr int kJuntaScale = 5;
constexpr int kJuntaScaled[] = {-3, -1, 1, 3, 5};

}  // namespace

double evaluate(const Hypothesis& h, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [&](const JuntaHyperplane& j) {
            if (j.weights.size() != x.size()) {
              throw InvalidInput("junta hyperplane of dimension " +
                                 std::to_string(j.weights.size()) + " applied to a " +
                                 std::to_string(x.size()) + "-dimensional input");
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += j.weights[i] * x[i];
            return acc;
          },
          [&](const Ramp& r) {
            const double v = coordinate_of(x, r.coordinate);
            if (v < r.a) return 0.0;
            if (v > r.b) return 1.0;
            return (v - r.a) / (r.b - r.a);
          },
          [&](const PiecewiseConstant& p) {
            const double v = coordinate_of(x, p.coordinate);
            const auto cell = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), v) -
                              p.breakpoints.begin();
            return p.values[static_cast<std::size_t>(cell)];
          },
          [&](const ExplicitTable& table) {
            for (std::size_t i = 0; i < table.points.size(); ++i) {
              const Point& p = table.points[i];
              if (p.size() != x.size()) continue;
              bool same = true;
              for (std::size_t c = 0; c < p.size() && same; ++c) {
                same = std::abs(p[c] - x[c]) <= 1e-12;
              }
              if (same) return table.values[i];
            }
            throw InvalidInput("explicit-table hypothesis has no entry for this input");
          },
      },
      h);
}

FunctionClass::FunctionClass(std::vector<Hypothesis> hypotheses, std::size_t domain_dim,
                             Interval label_range, double lipschitz_constant, std::string name)
    : hypotheses_(std::move(hypotheses)),
      domain_dim_(domain_dim),
      label_range_(label_range),
      lipschitz_(lipschitz_constant),
      name_(std::move(name)) {
  if (domain_dim_ == 0) throw InvalidInput("function class domain dimension must be >= 1");
}

double FunctionClass::eval(std::size_t k, std::span<const double> x) const {
  if (x.size() != domain_dim_) {
    throw InvalidInput("input has dimension " + std::to_string(x.size()) + ", class expects " +
                       std::to_string(domain_dim_));
  }
  return evaluate(hypotheses_[k], x);
}

std::vector<double> FunctionClass::traces(std::span<const Point> points) const {
  const std::size_t n = points.size();
  std::vector<double> out(hypotheses_.size() * n);
  for (const Point& p : points) {
    if (p.size() != domain_dim_) {
      throw InvalidInput("trace point has dimension " + std::to_string(p.size()) +
                         ", class expects " + std::to_string(domain_dim_));
    }
  }
  for (std::size_t k = 0; k < hypotheses_.size(); ++k) {
    for (std::size_t t = 0; t < n; ++t) out[k * n + t] = evaluate(hypotheses_[k], points[t]);
  }
  return out;
}

FunctionClass FunctionClass::merged_with(const FunctionClass& other) const {
  if (other.domain_dim_ != domain_dim_) {
    throw InvalidInput("cannot merge classes over different domain dimensions");
  }
  std::vector<Hypothesis> all = hypotheses_;
  std::set<std::vector<int>> seen;
  for (const auto& h : hypotheses_) {
    if (const auto* j = std::get_if<JuntaHyperplane>(&h)) seen.insert(j->scaled);
  }
  for (const auto& h : other.hypotheses_) {
    if (const auto* j = std::get_if<JuntaHyperplane>(&h)) {
      if (!seen.insert(j->scaled).second) continue;
    }
    all.push_back(h);
  }
  Interval range{std::min(label_range_.lo, other.label_range_.lo),
                 std::max(label_range_.hi, other.label_range_.hi)};
  return FunctionClass(std::move(all), domain_dim_, range,
                       std::max(lipschitz_, other.lipschitz_), name_ + "+" + other.name_);
}

std::vector<double> junta_coefficient_grid() {
  std::vector<double> grid;
  for (int s : kJuntaScaled) grid.push_back(static_cast<double>(s) / kJuntaScale);
  return grid;
}

FunctionClass appendix_class(std::size_t d, std::size_t c,
                             std::optional<std::vector<std::size_t>> support) {
  if (c == 0 || c > d) {
    throw InvalidInput("junta class needs 1 <= c <= d (got c=" + std::to_string(c) +
                       ", d=" + std::to_string(d) + ")");
  }
  std::vector<std::vector<std::size_t>> supports;
  if (support) {
    std::vector<std::size_t> s = *support;
    std::sort(s.begin(), s.end());
    if (s.size() != c || std::adjacent_find(s.begin(), s.end()) != s.end() ||
        (!s.empty() && s.back() >= d)) {
      throw InvalidInput("junta support must list c distinct coordinates below d");
    }
    supports.push_back(std::move(s));
  } else {
    std::vector<bool> mask(d, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(c), true);
    do {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < d; ++i) {
        if (mask[i]) s.push_back(i);
      }
      supports.push_back(std::move(s));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }

  constexpr std::size_t kGrid = std::size(kJuntaScaled);
  std::size_t per_support = 1;
  for (std::size_t i = 0; i < c; ++i) per_support *= kGrid;

  std::vector<Hypothesis> hyps;
  std::set<std::vector<int>> seen;
  double max_norm = 0.0;
  for (const auto& s : supports) {
    for (std::size_t code = 0; code < per_support; ++code) {
      JuntaHyperplane h;
      h.scaled.assign(d, 0);
      std::size_t rest = code;
      for (std::size_t i = 0; i < c; ++i) {
        h.scaled[s[i]] = kJuntaScaled[rest % kGrid];
        rest /= kGrid;
      }
      if (!seen.insert(h.scaled).second) continue;
      h.weights.resize(d);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        h.weights[i] = static_cast<double>(h.scaled[i]) / kJuntaScale;
        norm2 += h.weights[i] * h.weights[i];
      }
      max_norm = std::max(max_norm, std::sqrt(norm2));
      hyps.emplace_back(std::move(h));
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  return FunctionClass(std::move(hyps), d, Interval{-inf, inf}, max_norm,
                       support ? "junta-restricted" : "junta-entire");
}

FunctionClass bv_class(double max_variation, std::size_t cells, std::size_t value_steps,
                       std::size_t domain_dim, std::size_t coordinate) {
  if (cells == 0) throw InvalidInput("bv_class: cells must be >= 1");
  if (value_steps == 0) throw InvalidInput("bv_class: value_steps must be >= 1");
  if (!(max_variation >= 0.0)) throw InvalidInput("bv_class: variation bound must be >= 0");
  if (coordinate >= domain_dim) throw InvalidInput("bv_class: coordinate outside the domain");
  const std::size_t levels = value_steps + 1;
  double combos = std::pow(static_cast<double>(levels), static_cast<double>(cells));
  if (combos > 5e6) throw InvalidInput("bv_class: grid too large to enumerate");

  // Exact integer test: sum |delta j| <= V * steps.
  const long budget = static_cast<long>(std::floor(max_variation * value_steps + 1e-9));
  std::vector<double> breakpoints;
  for (std::size_t i = 1; i < cells; ++i) {
    breakpoints.push_back(static_cast<double>(i) / static_cast<double>(cells));
  }

  std::vector<Hypothesis> hyps;
  std::vector<std::size_t> digits(cells, 0);
  for (;;) {
    long tv = 0;
    for (std::size_t i = 1; i < cells; ++i) {
      tv += std::labs(static_cast<long>(digits[i]) - static_cast<long>(digits[i - 1]));
    }
    if (tv <= budget) {
      PiecewiseConstant p;
      p.breakpoints = breakpoints;
      p.coordinate = coordinate;
      for (std::size_t v : digits) {
        p.values.push_back(static_cast<double>(v) / static_cast<double>(value_steps));
      }
      p.total_variation = static_cast<double>(tv) / static_cast<double>(value_steps);
      hyps.emplace_back(std::move(p));
    }
    std::size_t i = 0;
    while (i < cells && ++digits[i] == levels) digits[i++] = 0;
    if (i == cells) break;
  }
  return FunctionClass(std::move(hyps), domain_dim, Interval{0.0, 1.0}, kNotLipschitz, "bv");
}

FunctionClass ramp_class(double slope, std::size_t count, double a_lo, double a_hi,
                         std::size_t domain_dim, std::size_t coordinate) {
  if (!(slope > 0.0)) throw InvalidInput("ramp_class: slope must be positive");
  if (count == 0) throw InvalidInput("ramp_class: count must be >= 1");
  if (coordinate >= domain_dim) throw InvalidInput("ramp_class: coordinate outside the domain");
  const double width = 1.0 / slope;
  if (!(a_lo > 0.0) || a_hi < a_lo || !(a_hi + width < 1.0)) {
    throw InvalidInput("ramp_class: need 0 < a and a + 1/M < 1 for every ramp");
  }
  std::vector<Hypothesis> hyps;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = count == 1 ? a_lo
                                : a_lo + (a_hi - a_lo) * static_cast<double>(i) /
                                             static_cast<double>(count - 1);
    hyps.emplace_back(Ramp{a, a + width, coordinate});
  }
  return FunctionClass(std::move(hyps), domain_dim, Interval{0.0, 1.0}, slope, "ramp");
}

FunctionClass constant_class(std::span<const double> values, std::size_t domain_dim) {
  std::vector<Hypothesis> hyps;
  double lo = 0.0, hi = 1.0;
  for (double v : values) {
    hyps.emplace_back(Constant{v});
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return FunctionClass(std::move(hyps), domain_dim, Interval{lo, hi}, 0.0, "constants");
}

FunctionClass threshold_class(std::span<const double> thresholds) {
  std::vector<Hypothesis> hyps;
  for (double theta : thresholds) {
    hyps.emplace_back(PiecewiseConstant{{theta}, {0.0, 1.0}, 0, 1.0});
  }
  return FunctionClass(std::move(hyps), 1, Interval{0.0, 1.0}, kNotLipschitz, "thresholds");
}

FunctionClass table_class(std::vector<Point> points, const std::vector<std::vector<double>>& rows) {
  if (points.empty()) throw InvalidInput("table_class: no points");
  const std::size_t d = points.front().size();
  std::vector<Hypothesis> hyps;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : rows) {
    if (row.size() != points.size()) {
      throw InvalidInput("table_class: row length differs from the number of points");
    }
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    hyps.emplace_back(ExplicitTable{points, row});
  }
  if (rows.empty()) lo = hi = 0.0;
  return FunctionClass(std::move(hyps), d, Interval{lo, hi}, kNotLipschitz, "table");
}

}  // namespace olr

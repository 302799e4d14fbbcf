#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "olr/classes.hpp"
#include "olr/core.hpp"

namespace olr {

enum class ExpertProvenance { cover, class_traces, meta_experts };

/// K x T matrix of per-round expert predictions. Stored round-major so the
/// K predictions of one round are contiguous.
class ExpertTable {
 public:
  ExpertTable() = default;
  ExpertTable(std::size_t experts, std::size_t rounds, ExpertProvenance provenance);

  std::size_t experts() const { return experts_; }
  std::size_t rounds() const { return rounds_; }
  ExpertProvenance provenance() const { return provenance_; }

  double at(std::size_t k, std::size_t t) const { return data_[t * experts_ + k]; }
  double& at(std::size_t k, std::size_t t) { return data_[t * experts_ + k]; }
  std::span<const double> round(std::size_t t) const {
    return {data_.data() + t * experts_, experts_};
  }
  std::vector<double> row(std::size_t k) const;

 private:
  std::size_t experts_ = 0;
  std::size_t rounds_ = 0;
  ExpertProvenance provenance_ = ExpertProvenance::class_traces;
  std::vector<double> data_;
};

/// Alpha-shattering certificate. realizing[mask] is the hypothesis index that
/// realizes the sign pattern with sigma_t = +1 iff bit t of mask is set.
struct ShatteringCertificate {
  std::vector<Point> points;
  std::vector<double> witness;
  std::vector<std::size_t> realizing;
  double alpha = 0.0;

  std::size_t size() const { return points.size(); }
};

/// Re-checks sigma_t (f(x_t) - witness_t) >= alpha / 2 for every pattern.
bool verify_certificate(const FunctionClass& cls, const ShatteringCertificate& cert,
                        double tol = 1e-12);

struct FatShatteringResult {
  std::size_t dimension = 0;
  ShatteringCertificate certificate;
  // The search stopped at max_m while larger sets were still possible.
  bool lower_bound_only = false;
};

inline constexpr std::size_t kMaxShatterSearch = 12;

FatShatteringResult fat_shattering_dim(const FunctionClass& cls, std::span<const Point> candidates,
                                       double alpha, std::size_t max_m = kMaxShatterSearch);

enum class CenterPolicy {
  trace_only,  // centers restricted to the class's own trace vectors
  midrange,    // any center; a group shares the coordinate-wise midrange
};

struct CoverOptions {
  CenterPolicy policy = CenterPolicy::midrange;
  bool exact = false;
  std::size_t exact_threshold = 20;
};

struct CoverResult {
  std::size_t size = 0;
  ExpertTable centers;
  // assignment[k] = center covering distinct trace k.
  std::vector<std::size_t> assignment;
  std::size_t distinct_traces = 0;
  bool exact = false;  // false: greedy, an upper bound on the minimum
};

/// Distinct rows of a K x n trace matrix (row-major), first occurrence kept.
std::vector<std::vector<double>> distinct_traces(std::span<const double> traces, std::size_t rows,
                                                 std::size_t cols);

/// l-infinity alpha-cover of the class's traces on `points`.
CoverResult covering_number_linf(const FunctionClass& cls, std::span<const Point> points,
                                 double alpha, const CoverOptions& options = {});

/// Same, directly on trace vectors.
CoverResult cover_traces(const std::vector<std::vector<double>>& traces, double alpha,
                         const CoverOptions& options = {});

struct Estimate {
  double mean = 0.0;
  double stderr = 0.0;
};

/// Monte-Carlo estimate of E sup_f (1/T) sum_t sigma_t f(x_t), sup exact.
Estimate empirical_rademacher(const FunctionClass& cls, std::span<const Point> points,
                              std::size_t samples, std::uint64_t seed);

}  // namespace olr

#include "olr/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "olr/rng.hpp"

namespace olr {

namespace {

constexpr double kTol = 1e-12;
constexpr std::size_t kAdjacencyLimit = 4096;

double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(a[t] - b[t]));
  return m;
}

}  // namespace

ExpertTable::ExpertTable(std::size_t experts, std::size_t rounds, ExpertProvenance provenance)
    : experts_(experts), rounds_(rounds), provenance_(provenance), data_(experts * rounds, 0.0) {}

std::vector<double> ExpertTable::row(std::size_t k) const {
  std::vector<double> out(rounds_);
  for (std::size_t t = 0; t < rounds_; ++t) out[t] = at(k, t);
  return out;
}

// ---------------------------------------------------------------------------
// Fat-shattering

bool verify_certificate(const FunctionClass& cls, const ShatteringCertificate& cert, double tol) {
  const std::size_t m = cert.points.size();
  if (cert.witness.size() != m) return false;
  if (m >= 63 || cert.realizing.size() != (std::size_t{1} << m)) return false;
  const double half = cert.alpha / 2.0;
  for (std::size_t mask = 0; mask < cert.realizing.size(); ++mask) {
    const std::size_t k = cert.realizing[mask];
    if (k >= cls.size()) return false;
    for (std::size_t t = 0; t < m; ++t) {
      const double sigma = ((mask >> t) & 1U) != 0 ? 1.0 : -1.0;
      if (sigma * (cls.eval(k, cert.points[t]) - cert.witness[t]) < half - tol) return false;
    }
  }
  return true;
}

namespace {

struct ShatterSearch {
  const std::vector<double>& values;  // K x n, hypothesis-major
  std::size_t n;
  double alpha;
  std::vector<std::size_t> cols;  // chosen candidate columns
  std::vector<double> witness;

  double v(std::size_t k, std::size_t j) const { return values[k * n + cols[j]]; }

  // alive: (hypothesis, pattern over coordinates < j)
  bool search(std::size_t j, const std::vector<std::pair<std::size_t, std::size_t>>& alive) {
    const std::size_t m = cols.size();
    if (j == m) return true;
    std::vector<double> levels;
    levels.reserve(alive.size());
    for (const auto& [k, pat] : alive) levels.push_back(v(k, j));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const std::size_t needed = std::size_t{1} << (j + 1);
    std::vector<std::pair<std::size_t, std::size_t>> next;
    std::vector<char> seen(needed);
    // Witness s = level - alpha/2 dominates every other witness with the same
    // plus-set: the minus-set {f <= s - alpha/2} only grows with s.
    for (double level : levels) {
      const double s = level - alpha / 2.0;
      next.clear();
      std::fill(seen.begin(), seen.end(), 0);
      std::size_t distinct = 0;
      for (const auto& [k, pat] : alive) {
        const double value = v(k, j);
        std::size_t bit;
        if (value >= s + alpha / 2.0 - kTol) {
          bit = 1;
        } else if (value <= s - alpha / 2.0 + kTol) {
          bit = 0;
        } else {
          continue;
        }
        const std::size_t p = pat | (bit << j);
        next.emplace_back(k, p);
        if (!seen[p]) {
          seen[p] = 1;
          ++distinct;
        }
      }
      if (distinct < needed) continue;
      witness[j] = s;
      if (search(j + 1, next)) return true;
    }
    return false;
  }
};

// Next m-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t m = c.size();
  for (std::size_t i = m; i-- > 0;) {
    if (c[i] < n - m + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<ShatteringCertificate> try_shatter(const FunctionClass& cls,
                                                 std::span<const Point> candidates,
                                                 const std::vector<double>& values,
                                                 const std::vector<std::size_t>& cols,
                                                 double alpha) {
  ShatterSearch search{values, candidates.size(), alpha, cols,
                       std::vector<double>(cols.size(), 0.0)};
  std::vector<std::pair<std::size_t, std::size_t>> alive;
  alive.reserve(cls.size());
  for (std::size_t k = 0; k < cls.size(); ++k) alive.emplace_back(k, 0);
  if (!search.search(0, alive)) return std::nullopt;

  const std::size_t m = cols.size();
  ShatteringCertificate cert;
  cert.alpha = alpha;
  for (std::size_t c : cols) cert.points.push_back(candidates[c]);
  cert.realizing.assign(std::size_t{1} << m, cls.size());
  // Lowest-index realizer of every pattern under the found witness.
  for (std::size_t k = 0; k < cls.size(); ++k) {
    std::size_t pat = 0;
    bool ok = true;
    for (std::size_t j = 0; j < m && ok; ++j) {
      const double value = search.v(k, j);
      if (value >= search.witness[j] + alpha / 2.0 - kTol) {
        pat |= std::size_t{1} << j;
      } else if (value > search.witness[j] - alpha / 2.0 + kTol) {
        ok = false;
      }
    }
    if (ok && cert.realizing[pat] == cls.size()) cert.realizing[pat] = k;
  }
  // Re-centre each witness at the midpoint between the lowest "+" value and
  // the highest "-" value among the realizers; margins stay >= alpha / 2.
  cert.witness.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double lowest_plus = std::numeric_limits<double>::infinity();
    double highest_minus = -lowest_plus;
    for (std::size_t mask = 0; mask < cert.realizing.size(); ++mask) {
      const double value = search.v(cert.realizing[mask], j);
      if ((mask >> j) & 1U) {
        lowest_plus = std::min(lowest_plus, value);
      } else {
        highest_minus = std::max(highest_minus, value);
      }
    }
    cert.witness[j] = (lowest_plus + highest_minus) / 2.0;
  }
  return cert;
}

}  // namespace

FatShatteringResult fat_shattering_dim(const FunctionClass& cls, std::span<const Point> candidates,
                                       double alpha, std::size_t max_m) {
  if (!(alpha > 0.0)) throw InvalidInput("fat_shattering_dim: alpha must be positive");
  if (max_m > kMaxShatterSearch) {
    throw InvalidInput("fat_shattering_dim: max_m is capped at " +
                       std::to_string(kMaxShatterSearch));
  }
  if (cls.empty()) throw EmptyClass("fat_shattering_dim: empty function class");

  const std::vector<double> values = cls.traces(candidates);
  const std::size_t n = candidates.size();
  FatShatteringResult result;
  std::size_t m = 1;
  for (; m <= std::min(max_m, n); ++m) {
    // 2^m distinct realizers are needed.
    if (m >= 63 || (std::size_t{1} << m) > cls.size()) break;
    std::vector<std::size_t> cols(m);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::optional<ShatteringCertificate> found;
    do {
      found = try_shatter(cls, candidates, values, cols, alpha);
    } while (!found && next_combination(cols, n));
    if (!found) break;
    result.dimension = m;
    result.certificate = std::move(*found);
  }
  const bool more_possible = result.dimension == max_m && max_m < n && max_m + 1 < 63 &&
                             (std::size_t{1} << (max_m + 1)) <= cls.size();
  result.lower_bound_only = more_possible;
  return result;
}

// ---------------------------------------------------------------------------
// Covers

std::vector<std::vector<double>> distinct_traces(std::span<const double> traces, std::size_t rows,
                                                 std::size_t cols) {
  std::map<std::vector<double>, std::size_t> index;
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < rows; ++k) {
    std::vector<double> row(traces.begin() + static_cast<std::ptrdiff_t>(k * cols),
                            traces.begin() + static_cast<std::ptrdiff_t>((k + 1) * cols));
    if (index.emplace(row, out.size()).second) out.push_back(std::move(row));
  }
  return out;
}

namespace {

using Traces = std::vector<std::vector<double>>;

struct Group {
  std::vector<std::size_t> members;
  std::vector<double> lo;
  std::vector<double> hi;
};

bool fits(const Group& g, const std::vector<double>& trace, double alpha) {
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double lo = std::min(g.lo[t], trace[t]);
    const double hi = std::max(g.hi[t], trace[t]);
    if (hi - lo > 2.0 * alpha + kTol) return false;
  }
  return true;
}

void absorb(Group& g, std::size_t i, const std::vector<double>& trace) {
  if (g.members.empty()) {
    g.lo = trace;
    g.hi = trace;
  } else {
    for (std::size_t t = 0; t < trace.size(); ++t) {
      g.lo[t] = std::min(g.lo[t], trace[t]);
      g.hi[t] = std::max(g.hi[t], trace[t]);
    }
  }
  g.members.push_back(i);
}

CoverResult from_groups(const std::vector<Group>& groups, std::size_t n, std::size_t rounds) {
  CoverResult r;
  r.size = groups.size();
  r.distinct_traces = n;
  r.assignment.assign(n, 0);
  r.centers = ExpertTable(groups.size(), rounds, ExpertProvenance::cover);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t t = 0; t < rounds; ++t) {
      r.centers.at(g, t) = 0.5 * (groups[g].lo[t] + groups[g].hi[t]);
    }
    for (std::size_t i : groups[g].members) r.assignment[i] = g;
  }
  return r;
}

CoverResult from_centers(const Traces& traces, const std::vector<std::size_t>& centers,
                         double alpha) {
  const std::size_t rounds = traces.empty() ? 0 : traces.front().size();
  CoverResult r;
  r.size = centers.size();
  r.distinct_traces = traces.size();
  r.centers = ExpertTable(centers.size(), rounds, ExpertProvenance::cover);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t t = 0; t < rounds; ++t) r.centers.at(c, t) = traces[centers[c]][t];
  }
  r.assignment.assign(traces.size(), 0);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (linf(traces[i], traces[centers[c]]) <= alpha + kTol) {
        r.assignment[i] = c;
        break;
      }
    }
  }
  return r;
}

// Pairwise relation as adjacency lists: within `radius` in l-infinity.
std::vector<std::vector<std::size_t>> neighbours(const Traces& traces, double radius) {
  const std::size_t n = traces.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    adj[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (linf(traces[i], traces[j]) <= radius + kTol) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

CoverResult greedy_trace_centers(const Traces& traces, double alpha) {
  const std::size_t n = traces.size();
  std::vector<std::size_t> centers;
  std::vector<char> covered(n, 0);
  if (n <= kAdjacencyLimit) {
    const auto adj = neighbours(traces, alpha);
    std::size_t remaining = n;
    while (remaining > 0) {
      std::size_t best = n, best_gain = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t gain = 0;
        for (std::size_t j : adj[i]) gain += covered[j] ? 0 : 1;
        if (gain > best_gain) {
          best_gain = gain;
          best = i;
        }
      }
      centers.push_back(best);
      for (std::size_t j : adj[best]) {
        if (!covered[j]) {
          covered[j] = 1;
          --remaining;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (covered[i]) continue;
      centers.push_back(i);
      for (std::size_t j = i; j < n; ++j) {
        if (!covered[j] && linf(traces[i], traces[j]) <= alpha + kTol) covered[j] = 1;
      }
    }
  }
  return from_centers(traces, centers, alpha);
}

CoverResult greedy_midrange(const Traces& traces, double alpha) {
  const std::size_t n = traces.size();
  const std::size_t rounds = traces.front().size();
  std::vector<Group> groups;
  if (n <= kAdjacencyLimit) {
    const auto adj = neighbours(traces, 2.0 * alpha);
    std::vector<char> covered(n, 0);
    std::size_t remaining = n;
    while (remaining > 0) {
      // Seed: the uncovered trace with the most uncovered compatible traces.
      std::size_t seed = n, best_degree = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (covered[i]) continue;
        std::size_t degree = 0;
        for (std::size_t j : adj[i]) degree += covered[j] ? 0 : 1;
        if (seed == n || degree > best_degree) {
          best_degree = degree;
          seed = i;
        }
      }
      Group g;
      absorb(g, seed, traces[seed]);
      std::vector<std::size_t> cand;
      for (std::size_t j : adj[seed]) {
        if (!covered[j] && j != seed) cand.push_back(j);
      }
      std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
        return adj[a].size() > adj[b].size();
      });
      for (std::size_t j : cand) {
        if (fits(g, traces[j], alpha)) absorb(g, j, traces[j]);
      }
      for (std::size_t j : g.members) covered[j] = 1;
      remaining -= g.members.size();
      groups.push_back(std::move(g));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      bool placed = false;
      for (auto& g : groups) {
        if (fits(g, traces[i], alpha)) {
          absorb(g, i, traces[i]);
          placed = true;
          break;
        }
      }
      if (!placed) {
        groups.emplace_back();
        absorb(groups.back(), i, traces[i]);
      }
    }
  }
  return from_groups(groups, n, rounds);
}

// Minimum set cover by balls around traces, iterative deepening.
CoverResult exact_trace_centers(const Traces& traces, double alpha) {
  const std::size_t n = traces.size();
  const auto adj = neighbours(traces, alpha);
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : adj[i]) ball[i] |= 1U << j;
  }
  const std::uint32_t all = n == 32 ? ~0U : ((1U << n) - 1U);
  std::vector<std::size_t> chosen;
  std::function<bool(std::uint32_t, std::size_t)> dfs = [&](std::uint32_t covered,
                                                            std::size_t budget) {
    if (covered == all) return true;
    if (budget == 0) return false;
    std::size_t first = 0;
    while ((covered >> first) & 1U) ++first;
    for (std::size_t c : adj[first]) {
      chosen.push_back(c);
      if (dfs(covered | ball[c], budget - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t k = 1; k <= n; ++k) {
    chosen.clear();
    if (dfs(0, k)) break;
  }
  auto r = from_centers(traces, chosen, alpha);
  r.exact = true;
  return r;
}

// Minimum partition into groups of coordinate-wise range <= 2 alpha.
CoverResult exact_midrange(const Traces& traces, double alpha) {
  const std::size_t n = traces.size();
  const std::size_t rounds = traces.front().size();
  std::vector<Group> groups, best;
  std::function<bool(std::size_t, std::size_t)> place = [&](std::size_t i, std::size_t budget) {
    if (i == n) return true;
    // Indexed: deeper calls may grow `groups` and reallocate.
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (!fits(groups[j], traces[i], alpha)) continue;
      const Group saved = groups[j];
      absorb(groups[j], i, traces[i]);
      if (place(i + 1, budget)) return true;
      groups[j] = saved;
    }
    if (groups.size() < budget) {
      groups.emplace_back();
      absorb(groups.back(), i, traces[i]);
      if (place(i + 1, budget)) return true;
      groups.pop_back();
    }
    return false;
  };
  for (std::size_t k = 1; k <= n; ++k) {
    groups.clear();
    if (place(0, k)) break;
  }
  auto r = from_groups(groups, n, rounds);
  r.exact = true;
  return r;
}

}  // namespace

CoverResult cover_traces(const Traces& traces, double alpha, const CoverOptions& options) {
  if (!(alpha >= 0.0)) throw InvalidInput("cover: alpha must be non-negative");
  if (traces.empty()) return {};
  if (alpha == 0.0) {
    // Zero radius: every distinct trace is its own center.
    std::vector<std::size_t> all(traces.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto r = from_centers(traces, all, 0.0);
    r.exact = true;
    return r;
  }
  const bool exact = options.exact && traces.size() <= options.exact_threshold &&
                     traces.size() <= 32;
  CoverResult r;
  if (options.policy == CenterPolicy::trace_only) {
    r = exact ? exact_trace_centers(traces, alpha) : greedy_trace_centers(traces, alpha);
  } else {
    r = exact ? exact_midrange(traces, alpha) : greedy_midrange(traces, alpha);
  }
  return r;
}

CoverResult covering_number_linf(const FunctionClass& cls, std::span<const Point> points,
                                 double alpha, const CoverOptions& options) {
  if (cls.empty()) throw EmptyClass("covering_number_linf: empty function class");
  const std::vector<double> tr = cls.traces(points);
  return cover_traces(distinct_traces(tr, cls.size(), points.size()), alpha, options);
}

Estimate empirical_rademacher(const FunctionClass& cls, std::span<const Point> points,
                              std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidInput("empirical_rademacher: samples must be >= 1");
  if (cls.empty()) throw EmptyClass("empirical_rademacher: empty function class");
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("empirical_rademacher: empty sequence");
  const std::vector<double> tr = cls.traces(points);
  Rng rng(seed);
  std::vector<double> sigma(n);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& v : sigma) v = rng.sign();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cls.size(); ++k) {
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += sigma[t] * tr[k * n + t];
      best = std::max(best, acc / static_cast<double>(n));
    }
    sum += best;
    sum_sq += best * best;
  }
  const double count = static_cast<double>(samples);
  Estimate e;
  e.mean = sum / count;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - count * e.mean * e.mean) / (count - 1.0));
    e.stderr = std::sqrt(var / count);
  }
  return e;
}

}  // namespace olr

#include "olr/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "olr/augmented.hpp"
#include "olr/complexity.hpp"
#include "olr/mwa.hpp"
#include "olr/predictors.hpp"
#include "olr/rng.hpp"
#include "olr/streams.hpp"
#include "olr/transductive.hpp"

namespace olr {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240601;

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

double final_loss(OnlineLearner& learner, const ExampleSequence& seq, const LossSpec& loss) {
  const RunTrace trace = run_online(learner, seq, loss);
  return std::accumulate(trace.losses.begin(), trace.losses.end(), 0.0);
}

std::vector<Point> line_points(std::span<const double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back({x});
  return out;
}

ExampleSequence label_exact(const std::vector<Point>& points, const FunctionClass& cls,
                            std::size_t k) {
  std::vector<double> y;
  for (const Point& p : points) y.push_back(cls.eval(k, p));
  return ExampleSequence(points, y);
}

// Tracks the tightest bound check of a suite.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();  // bound - value
  std::string worst;

  void check(bool ok, double slack, const std::string& label) {
    ++checks;
    if (!ok) ++failures;
    if (slack < worst_slack) {
      worst_slack = slack;
      worst = label;
    }
  }
};

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << std::setw(2) << r.id << " [" << r.suite << "] "
     << (r.passed ? "PASS" : "FAIL") << "  " << r.detail;
  return os.str();
}

// ---- 1: appendix figure -------------------------------------------------------

ExperimentConfig figure1_config(bool restricted, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.horizon = 1000;
  cfg.repetitions = 10;
  cfg.master_seed = seed;
  cfg.stream.kind = "lds-sparse";
  cfg.stream.d = 8;
  cfg.stream.c = 4;
  cfg.stream.noise_std = 0.1;
  cfg.cls.kind = "junta";
  cfg.cls.d = 8;
  cfg.cls.c = 4;
  cfg.cls.support = restricted ? "stream" : "all";
  cfg.learner.kind = restricted ? "transductive" : "class-mwa";
  cfg.learner.mode = MwaMode::sampled;
  return cfg;
}

double Figure1Result::gap(std::size_t t) const {
  return full.mean_cum_loss.at(t - 1) - restricted.mean_cum_loss.at(t - 1);
}

Figure1Result reproduce_figure1(std::uint64_t seed) {
  return {run_experiment(figure1_config(false, seed)), run_experiment(figure1_config(true, seed))};
}

Json figure1_summary(const Figure1Result& r) {
  Json j;
  j["T"] = r.full.rounds;
  j["repetitions"] = r.full.reps.size();
  j["master_seed"] = r.full.config.master_seed;
  j["full_net"] = {{"experts", r.full.reps.front().experts.value_or(0)},
                   {"final_mean_cum_loss", r.full.mean_cum_loss.back()}};
  j["restricted_net"] = {{"experts", r.restricted.reps.front().experts.value_or(0)},
                         {"final_mean_cum_loss", r.restricted.mean_cum_loss.back()}};
  Json gaps;
  for (std::size_t t : {10, 50, 100, 200, 500, 1000}) {
    if (t <= r.full.rounds) gaps[std::to_string(t)] = r.gap(t);
  }
  j["gap_full_minus_restricted"] = gaps;
  j["restricted_below_full"] = r.gap(r.full.rounds) > 0.0;
  j["gap_widened_100_to_T"] = r.full.rounds >= 100 && r.gap(r.full.rounds) > r.gap(100);
  j["commit"] = "unknown";
  return j;
}

void write_figure1(const Figure1Result& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_outputs(r.full, dir / "full_net.csv", false);
  write_outputs(r.restricted, dir / "restricted_net.csv", false);
  std::ofstream out(dir / "summary.json", std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + (dir / "summary.json").string());
  out << figure1_summary(r).dump(2) << '\n';
}

CriterionResult check_figure1() {
  const Figure1Result r = reproduce_figure1();
  const double g100 = r.gap(100);
  const double g1000 = r.gap(1000);
  const bool below = g1000 > 0.0;
  const bool widened = g1000 > g100;
  std::string detail = "final mean cum loss full=" + fmt(r.full.mean_cum_loss.back(), 6) +
                       " restricted=" + fmt(r.restricted.mean_cum_loss.back(), 6) +
                       "; gap(t=100)=" + fmt(g100) + " gap(t=1000)=" + fmt(g1000);
  if (!below) detail += "; restricted net is not below the full net";
  if (!widened) detail += "; gap did not widen";
  return {1, "figure1", below && widened, detail};
}

// ---- 2: MWA -------------------------------------------------------------------

CriterionResult check_mwa() {
  const std::size_t horizons[] = {64, 256, 1024};
  const std::size_t sizes[] = {2, 16, 128};
  constexpr std::size_t kInstances = 50;
  constexpr std::size_t kSeeds = 200;
  Tally averaged, sampled;
  std::size_t index = 0;
  for (std::size_t horizon : horizons) {
    for (std::size_t experts : sizes) {
      const double bound = std::sqrt(horizon * std::log(static_cast<double>(experts)) / 2.0);
      for (std::size_t i = 0; i < kInstances; ++i) {
        const std::uint64_t seed = derive_seed(kSuiteSeed + 2, index++);
        Rng rng(seed);
        std::vector<double> table(horizon * experts), labels(horizon);
        std::vector<double> flip(experts);
        for (double& f : flip) f = rng.uniform(0.3, 0.5);
        for (std::size_t t = 0; t < horizon; ++t) {
          switch (i % 3) {
            case 0:
              labels[t] = rng.uniform();
              for (std::size_t k = 0; k < experts; ++k) table[t * experts + k] = rng.uniform();
              break;
            case 1:
              labels[t] = rng.uniform() < 0.5 ? 0.0 : 1.0;
              for (std::size_t k = 0; k < experts; ++k) {
                table[t * experts + k] = rng.uniform() < 0.5 ? 0.0 : 1.0;
              }
              break;
            default: {
              // Expert quality reverses halfway through.
              labels[t] = rng.uniform() < 0.5 ? 0.0 : 1.0;
              for (std::size_t k = 0; k < experts; ++k) {
                const double p = t < horizon / 2 ? flip[k] : flip[experts - 1 - k];
                table[t * experts + k] = rng.uniform() < p ? 1.0 - labels[t] : labels[t];
              }
            }
          }
        }
        std::vector<double> losses(horizon * experts);
        std::vector<double> totals(experts, 0.0);
        for (std::size_t t = 0; t < horizon; ++t) {
          for (std::size_t k = 0; k < experts; ++k) {
            losses[t * experts + k] = std::abs(table[t * experts + k] - labels[t]);
            totals[k] += losses[t * experts + k];
          }
        }
        const double best = *std::min_element(totals.begin(), totals.end());
        auto play = [&](MwaMode mode, std::uint64_t s) {
          Mwa mwa(experts, horizon, s, mode);
          double total = 0.0;
          for (std::size_t t = 0; t < horizon; ++t) {
            std::span<const double> row(table.data() + t * experts, experts);
            total += std::abs(mwa.predict(row) - labels[t]);
            mwa.update(std::span<const double>(losses.data() + t * experts, experts));
          }
          return total - best;
        };
        const std::string label = "T=" + std::to_string(horizon) + " K=" + std::to_string(experts);
        const double avg = play(MwaMode::averaged, seed);
        averaged.check(avg <= bound + 1e-9, bound - avg, label);
        std::vector<double> regrets(kSeeds);
        for (std::size_t s = 0; s < kSeeds; ++s) regrets[s] = play(MwaMode::sampled, derive_seed(seed, s));
        const MeanSe m = mean_se(regrets);
        sampled.check(m.mean <= bound + 3.0 * m.se, bound + 3.0 * m.se - m.mean, label);
      }
    }
  }
  const bool ok = averaged.failures == 0 && sampled.failures == 0;
  return {2, "mwa", ok,
          std::to_string(averaged.checks) + " instances; averaged violations=" +
              std::to_string(averaged.failures) + " (min slack " + fmt(averaged.worst_slack) +
              " at " + averaged.worst + "); sampled violations=" +
              std::to_string(sampled.failures) + " (min slack " + fmt(sampled.worst_slack) +
              " at " + sampled.worst + ")"};
}

// ---- 3: transductive ----------------------------------------------------------

CriterionResult check_transductive() {
  constexpr std::size_t kT = 256;
  constexpr std::size_t kSeeds = 200;
  const std::vector<double> thetas = [] {
    std::vector<double> v;
    for (int i = 0; i < 32; ++i) v.push_back((i + 0.5) / 32.0);
    return v;
  }();
  const std::vector<std::pair<std::string, FunctionClass>> classes = {
      {"ramp", ramp_class(4.0, 12, 0.05, 0.7)},
      {"bv", bv_class(1.5, 5, 3)},
      {"thresholds", threshold_class(thetas)},
  };
  Tally tally;
  std::size_t index = 0;
  for (const auto& [name, cls] : classes) {
    for (double alpha : {0.0, 0.05, 0.1}) {
      for (std::size_t inst = 0; inst < 3; ++inst) {
        const std::uint64_t seed = derive_seed(kSuiteSeed + 3, index++);
        Rng rng(seed);
        const std::vector<Point> points = iid_uniform_points(1, kT, 0.0, 1.0, derive_seed(seed, 1));
        std::vector<double> y(kT);
        const std::size_t target = rng.below(cls.size());
        for (std::size_t t = 0; t < kT; ++t) {
          if (inst == 0) {
            y[t] = std::clamp(cls.eval(target, points[t]) + 0.1 * rng.normal(), 0.0, 1.0);
          } else if (inst == 1) {
            y[t] = rng.uniform();
          } else {
            y[t] = rng.uniform() < 0.5 ? 0.0 : 1.0;
          }
        }
        const ExampleSequence seq(points, y);
        TransductiveOptions opts;
        opts.alpha = alpha;
        opts.cover.policy = inst == 2 ? CenterPolicy::trace_only : CenterPolicy::midrange;
        opts.loss = LossSpec::l1(1.0);
        const CoverResult cover = covering_number_linf(cls, points, alpha, opts.cover);
        const double best = best_in_class_loss(cls, seq, opts.loss).loss;
        std::vector<double> regrets(kSeeds);
        for (std::size_t s = 0; s < kSeeds; ++s) {
          TransductiveLearner learner(cover.centers, opts, derive_seed(seed, 100 + s));
          regrets[s] = final_loss(learner, seq, opts.loss) - best;
        }
        const MeanSe m = mean_se(regrets);
        const double bound = transductive_regret_bound(kT, static_cast<double>(cover.size), alpha, 1.0);
        tally.check(m.mean <= bound + 3.0 * m.se, bound + 3.0 * m.se - m.mean,
                    name + " alpha=" + fmt(alpha) + " K_cover=" + std::to_string(cover.size));
      }
    }
  }
  return {3, "transductive", tally.failures == 0,
          std::to_string(tally.checks) + " instances x " + std::to_string(kSeeds) +
              " seeds; violations=" + std::to_string(tally.failures) + " (min slack " +
              fmt(tally.worst_slack) + " at " + tally.worst + ")"};
}

// ---- 4: consistency -----------------------------------------------------------

namespace {

struct RandomInstance {
  FunctionClass cls;
  ExampleSequence seq;
  std::string name;
};

RandomInstance random_instance(std::size_t i, std::uint64_t seed, std::size_t horizon) {
  Rng rng(seed);
  std::vector<Point> points;
  FunctionClass cls = [&] {
    switch (i % 4) {
      case 0: return ramp_class(2.0 + 6.0 * rng.uniform(), 3 + rng.below(8), 0.05, 0.45);
      case 1: return bv_class(1.0, 3 + rng.below(3), 2 + rng.below(2));
      case 2: {
        std::vector<double> th;
        for (std::size_t k = 0, n = 4 + rng.below(20); k < n; ++k) th.push_back(rng.uniform());
        return threshold_class(th);
      }
      default: return appendix_class(4, 2, std::vector<std::size_t>{0, 2});
    }
  }();
  if (i % 4 == 3) {
    points = gen_lds_sparse(4, 2, horizon, derive_seed(seed, 1)).points;
  } else {
    points = iid_uniform_points(1, horizon, 0.0, 1.0, derive_seed(seed, 1));
  }
  const std::size_t target = rng.below(cls.size());
  std::vector<double> y;
  for (const Point& p : points) y.push_back(cls.eval(target, p) + 0.1 * rng.normal());
  return {std::move(cls), ExampleSequence(points, y), ""};
}

}  // namespace

CriterionResult check_consistency() {
  constexpr std::size_t kConfigs = 20;
  std::size_t identical = 0;
  std::string mismatch;
  for (std::size_t i = 0; i < kConfigs; ++i) {
    const std::uint64_t seed = derive_seed(kSuiteSeed + 4, i);
    Rng rng(derive_seed(seed, 7));
    const std::size_t horizon = 20 + rng.below(280);
    RandomInstance inst = random_instance(i, seed, horizon);
    TransductiveOptions opts;
    opts.alpha = (i % 3) * 0.05;
    opts.mode = i % 2 == 0 ? MwaMode::sampled : MwaMode::averaged;
    opts.loss = LossSpec::l1(auto_normalization_bound(inst.cls, inst.seq));
    const std::vector<Point> truth = inst.seq.points();
    const std::uint64_t learner_seed = derive_seed(seed, 9);

    TransductiveLearner reference(inst.cls, truth, opts, learner_seed);
    const RunTrace a = run_online(reference, inst.seq, opts.loss);
    auto restart = make_alg2(perfect_predictor(truth), make_transductive_factory(inst.cls, opts),
                             learner_seed);
    const RunTrace b = run_online(*restart, inst.seq, opts.loss);
    const bool same = a.losses.size() == b.losses.size() &&
                      std::memcmp(a.losses.data(), b.losses.data(),
                                  a.losses.size() * sizeof(double)) == 0 &&
                      restart->restarts() == 1;
    if (same) {
      ++identical;
    } else if (mismatch.empty()) {
      mismatch = "; first mismatch at config " + std::to_string(i);
    }
  }
  return {4, "consistency", identical == kConfigs,
          std::to_string(identical) + "/" + std::to_string(kConfigs) +
              " configs bit-identical to the transductive learner" + mismatch};
}

// ---- 5: restart accounting ------------------------------------------------------

CriterionResult check_restarts() {
  struct Case {
    std::string name;
    std::vector<Point> points;
    std::function<PredictorPtr()> make;
    MissCriterion mode;
  };
  constexpr std::size_t kT = 300;
  std::vector<Case> cases;
  for (std::size_t rep = 0; rep < 5; ++rep) {
    const std::uint64_t seed = derive_seed(kSuiteSeed + 5, rep);
    const auto iid = iid_uniform_points(1, kT, 0.0, 1.0, derive_seed(seed, 1));
    const auto lds = gen_lds_sparse(6, 3, kT, derive_seed(seed, 2)).points;
    const auto rot = gen_lds_rotation(kT, 0.7, 0.4, 0.3 * static_cast<double>(rep)).points;
    const MissCriterion z = MissCriterion::zero_one();
    const std::uint64_t ps = derive_seed(seed, 3);
    auto corrupted = [](std::vector<Point> pts, MistakeSchedule s, double mag, std::uint64_t sd,
                        MissCriterion m) {
      return [=] { return corrupted_predictor(pts, s, mag, sd, m); };
    };
    cases.push_back({"corrupted rate 0.05", iid, corrupted(iid, MistakeSchedule::with_rate(0.05), 0.3, ps, z), z});
    cases.push_back({"corrupted rate 0.3", iid, corrupted(iid, MistakeSchedule::with_rate(0.3), 0.3, ps, z), z});
    cases.push_back({"corrupted explicit", iid, corrupted(iid, MistakeSchedule::at({5, 6, 100}), 0.3, ps, z), z});
    cases.push_back({"lds sparse", lds, [=] { return lds_predictor(6, kT, 6, z); }, z});
    cases.push_back({"lds rotation", rot, [=] { return lds_predictor(3, kT, 3, z); }, z});
    cases.push_back({"repeat-last", iid, [=] { return repeat_last_predictor(1, kT, z); }, z});
    const MissCriterion e05 = MissCriterion::eps_ball(0.05);
    const MissCriterion e10 = MissCriterion::eps_ball(0.1);
    cases.push_back({"eps shifted 0.02<0.05", iid, [=] { return shifted_predictor(iid, 0.02, e05); }, e05});
    cases.push_back({"eps corrupted 0.3>0.1", iid, corrupted(iid, MistakeSchedule::with_rate(0.1), 0.3, ps, e10), e10});
    cases.push_back({"eps corrupted 0.05<0.1", iid, corrupted(iid, MistakeSchedule::with_rate(0.1), 0.05, ps, e10), e10});
    const MissCriterion tiny = MissCriterion::eps_ball(1e-6);
    cases.push_back({"eps lds", lds, [=] { return lds_predictor(6, kT, 6, tiny); }, tiny});
    cases.push_back({"eps repeat-last rotation", rot, [=] { return repeat_last_predictor(3, kT, e05); }, e05});
  }

  std::size_t exact = 0, total_restarts = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const std::size_t dim = c.points.front().size();
    // Labels from a bounded class on coordinate 0.
    FunctionClass cls = bv_class(1.0, 4, 2, dim, 0);
    std::vector<double> y;
    for (const Point& p : c.points) y.push_back(std::clamp(p[0], 0.0, 1.0));
    const ExampleSequence seq(c.points, y);
    TransductiveOptions opts;
    opts.loss = LossSpec::l1(auto_normalization_bound(cls, seq));
    opts.loss.clamp_normalized = true;  // forecasts may leave [0, 1]
    auto learner = make_alg2(c.make(), make_transductive_factory(cls, opts), derive_seed(kSuiteSeed, i));
    run_online(*learner, seq, opts.loss);

    auto replay = c.make();
    const double eps = c.mode.kind == MissCriterion::Kind::eps_ball ? c.mode.epsilon : 0.0;
    const std::vector<double> grid{eps > 0.0 ? eps : 1.0};
    const MistakeLog log = mistake_metrics(*replay, c.points, grid, c.mode.metric);
    const std::size_t counted =
        c.mode.kind == MissCriterion::Kind::zero_one ? log.zero_one_count : log.eps_ball_counts.at(eps);
    total_restarts += learner->restarts();
    if (learner->restarts() == counted + 1 && learner->predictor().misses() == counted) {
      ++exact;
    } else if (first_bad.empty()) {
      first_bad = "; mismatch in '" + c.name + "': restarts=" + std::to_string(learner->restarts()) +
                  " counted misses=" + std::to_string(counted);
    }
  }
  return {5, "restarts", exact == cases.size(),
          std::to_string(exact) + "/" + std::to_string(cases.size()) +
              " configs with restarts == misses + 1 (total restarts " +
              std::to_string(total_restarts) + ")" + first_bad};
}

// ---- 6 and 7: corrupted predictors ------------------------------------------------

namespace {

struct CorruptedSetup {
  std::size_t horizon = 512;
  FunctionClass cls = threshold_class(std::vector<double>{});
  std::vector<Point> points;
  ExampleSequence seq;
  std::vector<std::size_t> rounds;
};

CorruptedSetup corrupted_setup(std::size_t mistakes) {
  CorruptedSetup s;
  std::vector<double> th;
  for (int i = 0; i < 16; ++i) th.push_back((i + 0.5) / 16.0);
  s.cls = threshold_class(th);
  const std::uint64_t seed = derive_seed(kSuiteSeed + 6, mistakes);
  s.points = iid_uniform_points(1, s.horizon, 0.0, 1.0, seed);
  s.seq = label_exact(s.points, s.cls, 7);
  Rng rng(derive_seed(seed, 1));
  std::vector<std::size_t> pool(s.horizon - 1);
  std::iota(pool.begin(), pool.end(), std::size_t{1});
  for (std::size_t i = 0; i < mistakes; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  s.rounds.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(mistakes));
  std::sort(s.rounds.begin(), s.rounds.end());
  return s;
}

constexpr double kCorruption = 0.3;

}  // namespace

CriterionResult check_lemma_basic() {
  constexpr std::size_t kSeeds = 200;
  Tally tally;
  std::string detail;
  for (std::size_t m : {0, 1, 4, 16}) {
    const CorruptedSetup s = corrupted_setup(m);
    TransductiveOptions opts;
    opts.loss = LossSpec::l1(1.0);
    opts.loss.clamp_normalized = true;
    const double best = best_in_class_loss(s.cls, s.seq, opts.loss).loss;
    std::vector<double> regrets(kSeeds);
    std::size_t restarts = 0;
    for (std::size_t i = 0; i < kSeeds; ++i) {
      auto pred = corrupted_predictor(s.points, MistakeSchedule::at(s.rounds), kCorruption, 0);
      auto learner = make_alg2(std::move(pred), make_transductive_factory(s.cls, opts),
                               derive_seed(kSuiteSeed + 60, i));
      regrets[i] = final_loss(*learner, s.seq, opts.loss) - best;
      restarts = learner->restarts();
    }
    const MeanSe r = mean_se(regrets);
    const double bound = (m + 1.0) * std::sqrt(s.horizon * std::log(s.cls.size()) / 2.0);
    tally.check(r.mean <= bound + 3.0 * r.se, bound + 3.0 * r.se - r.mean, "M=" + std::to_string(m));
    detail += "M=" + std::to_string(m) + ": " + fmt(r.mean) + " <= " + fmt(bound) +
              " (restarts " + std::to_string(restarts) + "); ";
  }
  return {6, "lemma-basic", tally.failures == 0, detail + "mean regret vs (M+1)*sqrt(T lnK/2)"};
}

CriterionResult check_lemma_mwa() {
  constexpr std::size_t kSeeds = 200;
  Tally tally;
  std::string detail;
  for (std::size_t m : {0, 1, 4, 16}) {
    const CorruptedSetup s = corrupted_setup(m);
    TransductiveOptions opts;
    opts.loss = LossSpec::l1(1.0);
    opts.loss.clamp_normalized = true;
    const double best = best_in_class_loss(s.cls, s.seq, opts.loss).loss;
    // Every tested M is 0 or a power of two, so the grid holds the c = M expert.
    const auto grid = piece_grid(s.horizon, PieceGrid::powers_of_two);
    std::vector<double> regrets(kSeeds);
    for (std::size_t i = 0; i < kSeeds; ++i) {
      auto factory = restart_factory(
          corrupted_factory(s.points, MistakeSchedule::at(s.rounds), kCorruption),
          make_transductive_factory(s.cls, opts));
      auto learner = make_piece_meta(grid, s.horizon, std::move(factory), opts.loss,
                                     derive_seed(kSuiteSeed + 70, i));
      regrets[i] = final_loss(*learner, s.seq, opts.loss) - best;
    }
    const MeanSe r = mean_se(regrets);
    const double k = static_cast<double>(s.cls.size());
    const double t = static_cast<double>(s.horizon);
    const double bound = 2.0 * (m + 1.0) * std::sqrt((t / (m + 1.0) + 1.0) * std::log(k) / 2.0) +
                         std::sqrt(t * std::log(static_cast<double>(grid.size())) / 2.0);
    tally.check(r.mean <= bound + 3.0 * r.se, bound + 3.0 * r.se - r.mean, "M=" + std::to_string(m));
    detail += "M=" + std::to_string(m) + ": " + fmt(r.mean) + " <= " + fmt(bound) + "; ";
  }
  return {7, "lemma-mwa", tally.failures == 0,
          detail + "powers-of-two grid of " +
              std::to_string(piece_grid(512, PieceGrid::powers_of_two).size()) + " experts"};
}

// ---- 8: eps-ball Lipschitz term -------------------------------------------------------

CriterionResult check_eps_lipschitz() {
  constexpr std::size_t kT = 1000;
  constexpr std::size_t kSeeds = 200;
  constexpr double kEps = 0.05;
  const double deltas[] = {0.0, 0.01, 0.02, 0.04};
  struct Setup {
    double slope;
    FunctionClass cls;
    std::size_t target;
  };
  // Labels near 0.5, so the shifted target stays the best expert for every delta.
  const Setup setups[] = {{2.0, ramp_class(2.0, 3, 0.02, 0.48), 1},
                          {10.0, ramp_class(10.0, 8, 0.1, 0.8), 4}};
  Tally bounds;
  bool linear = true;
  std::string detail;
  for (const Setup& su : setups) {
    const double a_star = std::get<Ramp>(su.cls[su.target]).a;
    const std::vector<Point> points =
        iid_uniform_points(1, kT, a_star + 0.45 / su.slope, a_star + 0.55 / su.slope,
                           derive_seed(kSuiteSeed + 8, static_cast<std::uint64_t>(su.slope)));
    const ExampleSequence seq = label_exact(points, su.cls, su.target);
    TransductiveOptions opts;
    opts.loss = LossSpec::l1(1.0);
    opts.loss.clamp_normalized = true;
    const double best = best_in_class_loss(su.cls, seq, opts.loss).loss;
    std::vector<std::vector<double>> regrets;
    for (double delta : deltas) {
      std::vector<double> r(kSeeds);
      std::size_t restarts = 0;
      for (std::size_t i = 0; i < kSeeds; ++i) {
        auto learner = make_alg2(shifted_predictor(points, delta, MissCriterion::eps_ball(kEps)),
                                 make_transductive_factory(su.cls, opts),
                                 derive_seed(kSuiteSeed + 80, i));
        r[i] = final_loss(*learner, seq, opts.loss) - best;
        restarts = std::max(restarts, learner->restarts());
      }
      std::vector<Point> forecast = points;
      for (Point& p : forecast) p[0] += delta;
      const std::size_t k_cover = covering_number_linf(su.cls, forecast, 0.0).size;
      const MeanSe m = mean_se(r);
      const double bound = transductive_regret_bound(kT, static_cast<double>(k_cover), 0.0, 1.0) +
                           delta * 1.0 * su.slope * kT;
      bounds.check(m.mean <= bound + 3.0 * m.se && restarts == 1, bound + 3.0 * m.se - m.mean,
                   "M=" + fmt(su.slope) + " delta=" + fmt(delta));
      regrets.push_back(std::move(r));
    }
    std::vector<double> excess;
    for (std::size_t j = 1; j < regrets.size(); ++j) {
      std::vector<double> diff(kSeeds);
      for (std::size_t i = 0; i < kSeeds; ++i) diff[i] = regrets[j][i] - regrets[0][i];
      excess.push_back(mean_se(diff).mean);
    }
    const double r1 = excess[1] / excess[0];
    const double r2 = excess[2] / excess[1];
    const bool ok = r1 >= 1.4 && r1 <= 2.6 && r2 >= 1.4 && r2 <= 2.6;
    linear = linear && ok;
    detail += "M=" + fmt(su.slope) + " excess(.01,.02,.04)=" + fmt(excess[0]) + "," +
              fmt(excess[1]) + "," + fmt(excess[2]) + " ratios " + fmt(r1, 3) + "," + fmt(r2, 3) +
              "; ";
  }
  return {8, "eps-lipschitz", bounds.failures == 0 && linear,
          detail + "bound violations=" + std::to_string(bounds.failures) + " (min slack " +
              fmt(bounds.worst_slack) + " at " + bounds.worst + ")"};
}

// ---- 9: scaling --------------------------------------------------------------

CriterionResult check_scaling() {
  const std::size_t horizons[] = {125, 250, 500, 1000, 2000};
  constexpr std::size_t kSeeds = 20;
  std::vector<double> log_t, log_r;
  std::string detail;
  for (std::size_t horizon : horizons) {
    std::vector<double> regrets(kSeeds);
    for (std::size_t i = 0; i < kSeeds; ++i) {
      const std::uint64_t seed = derive_seed(kSuiteSeed + 9, i);
      Rng rng(seed);
      const LdsStream stream = gen_lds_rotation(horizon, 1.0, 0.4, rng.uniform(0.0, 6.283185307179586));
      const FunctionClass cls = bv_class(1.0, 4, 4, 3, 0);
      const Hypothesis target = cls[rng.below(cls.size())];
      const ExampleSequence seq =
          label_with_noise(stream.points, target, 0.1, derive_seed(seed, 1), Interval{0.0, 1.0});
      TransductiveOptions opts;
      opts.loss = LossSpec::l1(1.0);
      opts.loss.clamp_normalized = true;
      const auto grid = piece_grid(horizon, PieceGrid::powers_of_two);
      auto learner = make_piece_meta(
          grid, horizon, restart_factory(lds_factory(3, 3), make_transductive_factory(cls, opts)),
          opts.loss, derive_seed(seed, 2));
      regrets[i] = final_loss(*learner, seq, opts.loss) - best_in_class_loss(cls, seq, opts.loss).loss;
    }
    const MeanSe m = mean_se(regrets);
    log_t.push_back(std::log(static_cast<double>(horizon)));
    log_r.push_back(std::log(std::max(m.mean, 1e-12)));
    detail += "T=" + std::to_string(horizon) + ":" + fmt(m.mean) + " ";
  }
  const double n = static_cast<double>(log_t.size());
  const double mx = std::accumulate(log_t.begin(), log_t.end(), 0.0) / n;
  const double my = std::accumulate(log_r.begin(), log_r.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    sxy += (log_t[i] - mx) * (log_r[i] - my);
    sxx += (log_t[i] - mx) * (log_t[i] - mx);
  }
  const double slope = sxy / sxx;
  return {9, "scaling", slope >= 0.40 && slope <= 0.65,
          "log-log slope " + fmt(slope) + " (mean final regret " + detail + ")"};
}

// ---- 10: lower bound ----------------------------------------------------------

CriterionResult check_lower_bound() {
  constexpr std::size_t kDraws = 1000;
  Tally tally;
  std::string detail;
  for (std::size_t d : {1, 2, 4}) {
    const FunctionClass cls = bv_class(static_cast<double>(d), d, 2);
    std::vector<Point> candidates;
    for (std::size_t i = 0; i < d; ++i) candidates.push_back({(i + 0.5) / static_cast<double>(d)});
    const FatShatteringResult fat = fat_shattering_dim(cls, candidates, 1.0);
    if (fat.dimension != d || !verify_certificate(cls, fat.certificate)) {
      return {10, "lower-bound", false, "no verified certificate of size " + std::to_string(d)};
    }
    const std::size_t horizon = 64 * d;
    const double bound = fat.certificate.alpha / 4.0 * std::sqrt(static_cast<double>(horizon * d));
    LossSpec loss = LossSpec::l1(1.0);
    TransductiveOptions opts;
    opts.loss = loss;
    const auto factory = make_transductive_factory(cls, opts);
    const auto pow2 = piece_grid(horizon, PieceGrid::powers_of_two);

    using Maker = std::function<std::unique_ptr<OnlineLearner>(const std::vector<Point>&, std::uint64_t)>;
    const std::vector<std::pair<std::string, Maker>> learners = {
        {"class-mwa", [&](const std::vector<Point>&, std::uint64_t s) {
           return std::make_unique<ClassMwaLearner>(cls, horizon, loss, s);
         }},
        {"transductive", [&](const std::vector<Point>& x, std::uint64_t s) {
           return std::make_unique<TransductiveLearner>(cls, x, opts, s);
         }},
        {"alg2-restart", [&](const std::vector<Point>& x, std::uint64_t s) {
           return make_alg2(perfect_predictor(x), factory, s);
         }},
        {"expert-c", [&](const std::vector<Point>& x, std::uint64_t s) {
           return make_expert_c(1, horizon, restart_factory(perfect_factory(x), factory), s);
         }},
        {"alg4-meta", [&](const std::vector<Point>& x, std::uint64_t s) {
           return make_piece_meta(pow2, horizon, restart_factory(perfect_factory(x), factory), loss, s);
         }},
        {"alg5-restart-eps", [&](const std::vector<Point>& x, std::uint64_t s) {
           return make_alg2(perfect_predictor(x, MissCriterion::eps_ball(0.1)), factory, s);
         }},
        {"alg6-meta-eps", [&](const std::vector<Point>& x, std::uint64_t s) {
           return make_piece_meta(
               pow2, horizon,
               restart_factory(perfect_factory(x, MissCriterion::eps_ball(0.1)), factory), loss, s);
         }},
    };
    for (const auto& [name, make] : learners) {
      std::vector<double> regrets(kDraws);
      for (std::size_t j = 0; j < kDraws; ++j) {
        const std::uint64_t seed = derive_seed(kSuiteSeed + 10, d * 100000 + j);
        const HardInstance hard = gen_rademacher_hard(fat.certificate, horizon, seed, 0.0, 1.0);
        const std::vector<Point> x = hard.sequence.points();
        auto learner = make(x, derive_seed(seed, 1));
        regrets[j] = final_loss(*learner, hard.sequence, loss) -
                     best_in_class_loss(cls, hard.sequence, loss).loss;
      }
      const MeanSe m = mean_se(regrets);
      tally.check(m.mean >= bound - 3.0 * m.se, m.mean + 3.0 * m.se - bound,
                  name + " d=" + std::to_string(d));
    }
    detail += "d=" + std::to_string(d) + " bound " + fmt(bound) + "; ";
  }
  return {10, "lower-bound", tally.failures == 0,
          detail + "7 learners x 3 dims, violations=" + std::to_string(tally.failures) +
              " (min margin " + fmt(tally.worst_slack) + " at " + tally.worst + ")"};
}

// ---- 11: dimension oracle ------------------------------------------------------

CriterionResult check_dimension() {
  std::size_t checks = 0, failures = 0;
  std::string first;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first.empty()) first = "; first failure: " + what;
    }
  };
  const std::vector<Point> grid = line_points(std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9});

  // Singletons have dimension 0 at every scale.
  const std::vector<FunctionClass> singletons = {
      constant_class(std::vector<double>{0.4}), ramp_class(2.0, 1, 0.2, 0.2),
      threshold_class(std::vector<double>{0.5}), bv_class(0.0, 1, 1)};
  for (const auto& cls : singletons) {
    if (cls.size() != 1) continue;
    for (double alpha : {0.01, 0.5, 1.0}) {
      expect(fat_shattering_dim(cls, grid, alpha).dimension == 0, "singleton " + cls.name());
    }
  }
  // Two constants {0, 1}: dimension 1 for alpha <= 1.
  const FunctionClass pair = constant_class(std::vector<double>{0.0, 1.0});
  for (double alpha : {0.1, 0.5, 1.0}) {
    const auto r = fat_shattering_dim(pair, grid, alpha);
    expect(r.dimension == 1 && verify_certificate(pair, r.certificate), "two constants alpha=" + fmt(alpha));
  }
  expect(fat_shattering_dim(pair, grid, 1.5).dimension == 0, "two constants alpha=1.5");

  // Every certificate from random classes verifies independently.
  std::size_t certificates = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    Rng rng(derive_seed(kSuiteSeed + 11, i));
    const std::size_t n = 3 + rng.below(4);
    std::vector<Point> pts;
    for (std::size_t j = 0; j < n; ++j) pts.push_back({rng.uniform()});
    std::vector<std::vector<double>> rows(4 + rng.below(28), std::vector<double>(n));
    for (auto& row : rows) {
      for (double& v : row) v = std::round(rng.uniform() * 4.0) / 4.0;
    }
    const FunctionClass table = table_class(pts, rows);
    for (double alpha : {0.25, 0.5, 1.0}) {
      const auto r = fat_shattering_dim(table, pts, alpha);
      if (r.dimension > 0) {
        ++certificates;
        expect(verify_certificate(table, r.certificate), "table certificate " + std::to_string(i));
      }
      for (CenterPolicy policy : {CenterPolicy::trace_only, CenterPolicy::midrange}) {
        CoverOptions greedy{policy, false};
        CoverOptions exact{policy, true};
        const auto g = covering_number_linf(table, pts, alpha, greedy);
        const auto e = covering_number_linf(table, pts, alpha, exact);
        if (e.distinct_traces <= 20) {
          expect(e.exact && e.size <= g.size, "exact <= greedy on table " + std::to_string(i));
        }
      }
    }
  }
  return {11, "dimension", failures == 0,
          std::to_string(checks) + " checks, " + std::to_string(certificates) +
              " certificates verified, failures=" + std::to_string(failures) + first};
}

// ---- 12: determinism -------------------------------------------------------------

CriterionResult check_determinism() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("olr-determinism-" + std::to_string(kSuiteSeed));
  std::filesystem::create_directories(dir);
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig c = figure1_config(true, 7);
    c.horizon = 200;
    c.repetitions = 3;
    configs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.horizon = 128;
    c.repetitions = 2;
    c.master_seed = 11;
    c.stream.kind = "iid-uniform";
    c.stream.d = 1;
    c.stream.noise_std = 0.05;
    c.stream.clip = Interval{0.0, 1.0};
    c.cls.kind = "bv";
    c.cls.variation = 1.0;
    c.cls.cells = 4;
    c.cls.steps = 2;
    c.learner.kind = "alg4-meta";
    c.learner.augmented.kind = AugmentedKind::alg4_meta;
    c.learner.augmented.grid = PieceGrid::powers_of_two;
    c.predictor.kind = "corrupted";
    c.predictor.rate = 0.05;
    configs.push_back(c);
  }
  std::size_t identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string bytes[2];
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / ("run" + std::to_string(i) + "_" + std::to_string(run) + ".csv");
      write_outputs(run_experiment(configs[i]), path, true);
      std::ifstream in(path, std::ios::binary);
      std::ifstream side(path.string() + ".json", std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf() << side.rdbuf();
      bytes[run] = ss.str();
    }
    if (!bytes[0].empty() && bytes[0] == bytes[1]) ++identical;
  }
  std::filesystem::remove_all(dir);
  return {12, "determinism", identical == configs.size(),
          std::to_string(identical) + "/" + std::to_string(configs.size()) +
              " configs produced byte-identical CSV and sidecar output on repeat"};
}

// ---- dispatch -------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "figure1", "mwa",        "transductive", "consistency", "restarts",    "lemma-basic",
      "lemma-mwa", "eps-lipschitz", "scaling", "lower-bound", "dimension", "determinism", "all"};
  return names;
}

std::vector<CriterionResult> run_suite(const std::string& name) {
  using Check = CriterionResult (*)();
  static const std::map<std::string, Check> checks{
      {"figure1", check_figure1},         {"mwa", check_mwa},
      {"transductive", check_transductive}, {"consistency", check_consistency},
      {"restarts", check_restarts},       {"lemma-basic", check_lemma_basic},
      {"lemma-mwa", check_lemma_mwa},     {"eps-lipschitz", check_eps_lipschitz},
      {"scaling", check_scaling},         {"lower-bound", check_lower_bound},
      {"dimension", check_dimension},     {"determinism", check_determinism}};
  std::vector<CriterionResult> out;
  if (name == "all") {
    for (const auto& n : suite_names()) {
      if (n != "all") out.push_back(checks.at(n)());
    }
    return out;
  }
  const auto it = checks.find(name);
  if (it == checks.end()) throw InvalidInput("unknown suite '" + name + "'");
  out.push_back(it->second());
  return out;
}

}  // namespace olr

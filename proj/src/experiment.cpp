#include "olr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "olr/augmented.hpp"
#include "olr/complexity.hpp"
#include "olr/predictors.hpp"
#include "olr/rng.hpp"
#include "olr/streams.hpp"
#include "olr/transductive.hpp"

namespace olr {

RepSeeds RepSeeds::of(std::uint64_t master_seed, std::size_t rep) {
  RepSeeds s;
  s.rep = master_seed + rep;
  s.stream = derive_seed(s.rep, 1);
  s.labels = derive_seed(s.rep, 2);
  s.target = derive_seed(s.rep, 3);
  s.learner = derive_seed(s.rep, 4);
  s.predictor = derive_seed(s.rep, 5);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MeanSe mean_se(std::span<const double> values) {
  MeanSe r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

namespace {

std::vector<Point> stream_points(const StreamConfig& s, std::size_t horizon, std::uint64_t seed) {
  if (s.kind == "lds-sparse") {
    LdsOptions opt;
    opt.spectral_radius = s.spectral_radius;
    opt.init_lo = s.init_lo;
    opt.init_hi = s.init_hi;
    return gen_lds_sparse(s.d, s.c, horizon, seed, opt).points;
  }
  if (s.kind == "lds-rotation") return gen_lds_rotation(horizon, s.angle, s.radius, s.phase).points;
  return iid_uniform_points(s.d, horizon, s.lo, s.hi, seed);
}

// f* for the "auto" target: juntas draw from the net on the stream's support.
Hypothesis draw_target(const ExperimentConfig& cfg, const FunctionClass& cls,
                       std::span<const Point> points, std::uint64_t seed,
                       std::optional<std::size_t>& index) {
  Rng rng(seed);
  if (cfg.stream.target_index) {
    if (*cfg.stream.target_index >= cls.size()) {
      throw InvalidInput("field 'stream.target': index " + std::to_string(*cfg.stream.target_index) +
                         " outside a class of " + std::to_string(cls.size()));
    }
    index = cfg.stream.target_index;
    return cls.hypotheses()[*index];
  }
  if (cfg.cls.kind == "junta") {
    ClassConfig restricted = cfg.cls;
    restricted.support = "stream";
    const FunctionClass net = build_class(restricted, points);
    const std::size_t k = rng.below(net.size());
    index.reset();
    return net.hypotheses()[k];
  }
  const std::size_t k = rng.below(cls.size());
  index = k;
  return cls.hypotheses()[k];
}

}  // namespace

Instance build_instance(const ExperimentConfig& cfg, const RepSeeds& seeds) {
  const StreamConfig& s = cfg.stream;
  if (s.kind == "explicit-csv") {
    ExampleSequence full = read_stream_csv(s.path);
    if (full.size() < cfg.horizon) {
      throw InvalidInput("field 'stream.path': " + s.path + " has " + std::to_string(full.size()) +
                         " rows, T is " + std::to_string(cfg.horizon));
    }
    std::vector<LabeledExample> rows(full.examples().begin(),
                                     full.examples().begin() +
                                         static_cast<std::ptrdiff_t>(cfg.horizon));
    ExampleSequence seq(std::move(rows));
    FunctionClass cls = build_class(cfg.cls, seq.points());
    return {std::move(seq), std::move(cls), std::nullopt};
  }
  if (s.kind == "rademacher-hard") {
    FunctionClass cls = build_class(cfg.cls, s.candidates);
    const auto dim = fat_shattering_dim(cls, s.candidates, s.alpha);
    if (dim.dimension == 0) {
      throw InvalidInput("field 'stream.candidates': no point is alpha-shattered by the class");
    }
    HardInstance hard =
        gen_rademacher_hard(dim.certificate, cfg.horizon, seeds.labels, s.label_lo, s.label_hi);
    return {std::move(hard.sequence), std::move(cls), std::nullopt};
  }
  std::vector<Point> points = stream_points(s, cfg.horizon, seeds.stream);
  FunctionClass cls = build_class(cfg.cls, points);
  std::optional<std::size_t> index;
  const Hypothesis target = draw_target(cfg, cls, points, seeds.target, index);
  ExampleSequence seq = label_with_noise(points, target, s.noise_std, seeds.labels, s.clip);
  return {std::move(seq), std::move(cls), index};
}

double auto_normalization_bound(const FunctionClass& cls, const ExampleSequence& seq) {
  Interval range = cls.label_range();
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    range = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < cls.size(); ++k) {
      for (std::size_t t = 0; t < seq.size(); ++t) {
        const double v = cls.eval(k, seq[t].x);
        range.lo = std::min(range.lo, v);
        range.hi = std::max(range.hi, v);
      }
    }
  }
  double b = 0.0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    b = std::max({b, std::abs(seq[t].y - range.lo), std::abs(seq[t].y - range.hi)});
  }
  return b > 0.0 ? b : 1.0;
}

LossSpec resolve_loss(const ExperimentConfig& cfg, const FunctionClass& cls,
                      const ExampleSequence& seq) {
  LossSpec spec = LossSpec::l1(cfg.loss.normalization_bound
                                   ? *cfg.loss.normalization_bound
                                   : auto_normalization_bound(cls, seq));
  spec.clamp_normalized = cfg.loss.clamp;
  spec.validate();
  return spec;
}

std::function<PredictorFactory(MissCriterion)> predictor_source(const PredictorConfig& p,
                                                                std::vector<Point> truth,
                                                                std::uint64_t seed) {
  const std::size_t dim = truth.empty() ? 1 : truth.front().size();
  MistakeSchedule schedule;
  if (p.kind == "corrupted") {
    schedule = p.explicit_rounds
                   ? MistakeSchedule::at(p.rounds)
                   : MistakeSchedule::at(MistakeSchedule::with_rate(p.rate).realize(truth.size(),
                                                                                    seed));
  }
  return [p, truth = std::move(truth), dim, schedule](MissCriterion mode) -> PredictorFactory {
    if (mode.kind == MissCriterion::Kind::eps_ball) mode.metric = p.metric;
    if (p.kind == "perfect") return perfect_factory(truth, mode);
    if (p.kind == "repeat-last") return repeat_last_factory(dim, mode);
    if (p.kind == "lds") {
      return lds_factory(dim, p.identification_rounds == 0 ? dim : p.identification_rounds, mode);
    }
    if (p.kind == "corrupted") return corrupted_factory(truth, schedule, p.magnitude, mode);
    return shifted_factory(truth, p.delta, mode);
  };
}

std::unique_ptr<OnlineLearner> build_learner(const ExperimentConfig& cfg, const FunctionClass& cls,
                                             const ExampleSequence& seq, const LossSpec& loss,
                                             const RepSeeds& seeds) {
  const LearnerConfig& l = cfg.learner;
  if (l.kind == "class-mwa") {
    return std::make_unique<ClassMwaLearner>(cls, seq.size(), loss, seeds.learner, l.mode);
  }
  TransductiveOptions opts;
  opts.alpha = l.alpha;
  opts.cover = l.cover;
  opts.mode = l.mode;
  opts.loss = loss;
  if (l.kind == "transductive") {
    const std::vector<Point> points = seq.points();
    return std::make_unique<TransductiveLearner>(cls, points, opts, seeds.learner);
  }
  AugmentedParts parts;
  parts.predictors = predictor_source(cfg.predictor, seq.points(), seeds.predictor);
  parts.transductive = make_transductive_factory(cls, opts);
  parts.loss = loss;
  return make_augmented(l.augmented, seq.size(), parts, seeds.learner);
}

RepOutcome run_repetition(const ExperimentConfig& cfg, std::size_t rep) {
  RepOutcome out;
  out.seeds = RepSeeds::of(cfg.master_seed, rep);
  Instance inst = build_instance(cfg, out.seeds);
  const LossSpec loss = resolve_loss(cfg, inst.cls, inst.sequence);
  auto learner = build_learner(cfg, inst.cls, inst.sequence, loss, out.seeds);
  const RunTrace trace = run_online(*learner, inst.sequence, loss);
  const RegretReport report =
      accumulate_regret(trace.losses, inst.cls, inst.sequence, loss, cfg.baseline);
  out.cum_loss = report.cumulative_learner_loss;
  out.cum_best = report.best_in_class_loss;
  out.regret = report.regret;
  out.normalization_bound = loss.normalization_bound;
  out.class_size = inst.cls.size();
  out.target_index = inst.target_index;
  out.best_index = report.best_index;
  if (const auto* r = dynamic_cast<const RestartLearner*>(learner.get())) out.restarts = r->restarts();
  if (const auto* t = dynamic_cast<const TransductiveLearner*>(learner.get())) {
    out.experts = t->experts();
  }
  if (const auto* c = dynamic_cast<const ClassMwaLearner*>(learner.get())) out.experts = c->experts();
  if (const auto* m = dynamic_cast<const MetaLearner*>(learner.get())) out.experts = m->experts();
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.config = cfg;
  for (std::size_t r = 0; r < cfg.repetitions; ++r) res.reps.push_back(run_repetition(cfg, r));
  res.rounds = res.reps.front().regret.size();
  for (const auto& rep : res.reps) {
    if (rep.regret.size() != res.rounds) throw ContractViolation("repetitions differ in length");
  }
  const std::size_t n = res.rounds;
  res.mean_cum_loss.assign(n, 0.0);
  res.mean_cum_best.assign(n, 0.0);
  res.mean_regret.assign(n, 0.0);
  res.stderr_regret.assign(n, 0.0);
  std::vector<double> column(res.reps.size());
  for (std::size_t t = 0; t < n; ++t) {
    double loss_sum = 0.0, best_sum = 0.0;
    for (std::size_t r = 0; r < res.reps.size(); ++r) {
      loss_sum += res.reps[r].cum_loss[t];
      best_sum += res.reps[r].cum_best[t];
      column[r] = res.reps[r].regret[t];
    }
    const double count = static_cast<double>(res.reps.size());
    res.mean_cum_loss[t] = loss_sum / count;
    res.mean_cum_best[t] = best_sum / count;
    const MeanSe m = mean_se(column);
    res.mean_regret[t] = m.mean;
    res.stderr_regret[t] = m.se;
  }

  const LearnerConfig& l = cfg.learner;
  if (is_augmented(l.kind)) {
    const auto& a = l.augmented;
    if (a.kind == AugmentedKind::alg4_meta || a.kind == AugmentedKind::alg6_meta_eps ||
        a.kind == AugmentedKind::eps_grid_meta) {
      const auto pieces = piece_grid(n, a.grid, a.full_grid_limit);
      const bool full = pieces.size() == n;
      res.grid["pieces"] = {{"kind", full ? "full" : "powers-of-two"}, {"size", pieces.size()}};
    }
    if (a.kind == AugmentedKind::eps_grid_meta) {
      res.grid["epsilon"] = a.eps_grid.empty() ? epsilon_grid(n, a.kappa) : a.eps_grid;
    }
  }
  return res;
}

void write_csv(const ExperimentResult& result, const std::filesystem::path& path, bool per_rep) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << "t,mean_cum_loss,mean_cum_best,mean_regret,stderr_regret";
  if (per_rep) {
    for (std::size_t r = 0; r < result.reps.size(); ++r) {
      out << ",cum_loss_r" << r << ",regret_r" << r;
    }
  }
  out << '\n';
  for (std::size_t t = 0; t < result.rounds; ++t) {
    out << (t + 1) << ',' << format_double(result.mean_cum_loss[t]) << ','
        << format_double(result.mean_cum_best[t]) << ',' << format_double(result.mean_regret[t])
        << ',' << format_double(result.stderr_regret[t]);
    if (per_rep) {
      for (const auto& rep : result.reps) {
        out << ',' << format_double(rep.cum_loss[t]) << ',' << format_double(rep.regret[t]);
      }
    }
    out << '\n';
  }
  if (!out) throw InvalidInput("write failed: " + path.string());
}

Json sidecar(const ExperimentResult& result) {
  Json j;
  j["config"] = to_json(result.config);
  j["commit"] = "unknown";
  j["rounds"] = result.rounds;
  Json reps = Json::array();
  for (const auto& rep : result.reps) {
    Json r;
    r["seed"] = rep.seeds.rep;
    r["seeds"] = {{"stream", rep.seeds.stream},   {"labels", rep.seeds.labels},
                  {"target", rep.seeds.target},   {"learner", rep.seeds.learner},
                  {"predictor", rep.seeds.predictor}};
    r["normalization_bound"] = rep.normalization_bound;
    r["class_size"] = rep.class_size;
    if (rep.target_index) {
      r["target_index"] = *rep.target_index;
    } else {
      r["target_index"] = nullptr;
    }
    r["best_index"] = rep.best_index;
    if (rep.experts) r["experts"] = *rep.experts;
    if (rep.restarts) r["restarts"] = *rep.restarts;
    r["final_cum_loss"] = rep.cum_loss.back();
    r["final_regret"] = rep.regret.back();
    reps.push_back(r);
  }
  j["repetitions"] = reps;
  j["grid"] = result.grid.is_null() ? Json::object() : result.grid;
  j["summary"] = {{"final_mean_cum_loss", result.mean_cum_loss.back()},
                  {"final_mean_cum_best", result.mean_cum_best.back()},
                  {"final_mean_regret", result.mean_regret.back()},
                  {"final_stderr_regret", result.stderr_regret.back()}};
  if (result.config.stream.kind == "lds-sparse") {
    j["stream_notes"] = {
        {"transition", "i.i.d. standard normal entries on the support, rescaled to the spectral radius"},
        {"initial_state", "i.i.d. uniform on [init_lo, init_hi] over the support"}};
  }
  return j;
}

void write_sidecar(const ExperimentResult& result, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << sidecar(result).dump(2) << '\n';
  if (!out) throw InvalidInput("write failed: " + path.string());
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& csv, bool per_rep) {
  write_csv(result, csv, per_rep);
  write_sidecar(result, csv.string() + ".json");
}

}  // namespace olr

#include "olr/config.hpp"

#include <fstream>
#include <set>

namespace olr {

namespace {

// Reads fields off one JSON object, remembering which keys were consumed so
// typos surface as errors instead of silently falling back to defaults.
class Fields {
 public:
  Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidInput("field '" + where_ + "': expected an object");
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    used_.insert(key);
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidInput("field '" + path(key) + "': wrong type");
    }
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    if (!j_.contains(key) || j_.at(key).is_null()) {
      if (j_.contains(key)) used_.insert(key);
      return std::nullopt;
    }
    return get<T>(key, T{});
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw InvalidInput("field '" + path(key) + "': unknown key");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw InvalidInput("field '" + field + "': " + why);
}

MwaMode parse_mode(const std::string& s, const std::string& field) {
  if (s == "sampled") return MwaMode::sampled;
  if (s == "averaged") return MwaMode::averaged;
  bad(field, "expected 'sampled' or 'averaged', got '" + s + "'");
}

std::string mode_name(MwaMode m) { return m == MwaMode::sampled ? "sampled" : "averaged"; }

PieceGrid parse_grid(const std::string& s, const std::string& field) {
  if (s == "full") return PieceGrid::full;
  if (s == "powers-of-two") return PieceGrid::powers_of_two;
  if (s == "auto") return PieceGrid::automatic;
  bad(field, "expected 'full', 'powers-of-two' or 'auto', got '" + s + "'");
}

std::string grid_name(PieceGrid g) {
  switch (g) {
    case PieceGrid::full: return "full";
    case PieceGrid::powers_of_two: return "powers-of-two";
    case PieceGrid::automatic: return "auto";
  }
  return "auto";
}

Metric parse_metric(const std::string& s, const std::string& field) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "max-abs") return Metric::max_abs;
  bad(field, "expected 'euclidean' or 'max-abs', got '" + s + "'");
}

std::string metric_name(Metric m) { return m == Metric::euclidean ? "euclidean" : "max-abs"; }

StreamConfig parse_stream(const Json& j) {
  Fields f(j, "stream");
  StreamConfig s;
  s.kind = f.get<std::string>("kind", s.kind);
  static const std::set<std::string> kinds{"lds-sparse", "lds-rotation", "iid-uniform",
                                           "rademacher-hard", "explicit-csv"};
  if (!kinds.count(s.kind)) bad("stream.kind", "unknown stream kind '" + s.kind + "'");
  s.d = f.get<std::size_t>("d", s.d);
  s.c = f.get<std::size_t>("c", s.c);
  s.noise_std = f.get<double>("noise_std", s.noise_std);
  s.spectral_radius = f.get<double>("spectral_radius", s.spectral_radius);
  if (f.has("init")) {
    const auto init = f.get<std::vector<double>>("init", {});
    if (init.size() != 2 || !(init[0] <= init[1])) bad("stream.init", "expected [lo, hi]");
    s.init_lo = init[0];
    s.init_hi = init[1];
  }
  s.lo = f.get<double>("lo", s.lo);
  s.hi = f.get<double>("hi", s.hi);
  s.angle = f.get<double>("angle", s.angle);
  s.radius = f.get<double>("radius", s.radius);
  s.phase = f.get<double>("phase", s.phase);
  s.path = f.get<std::string>("path", s.path);
  if (f.has("clip") && !j.at("clip").is_null()) {
    const auto clip = f.get<std::vector<double>>("clip", {});
    if (clip.size() != 2 || !(clip[0] <= clip[1])) bad("stream.clip", "expected [lo, hi]");
    s.clip = Interval{clip[0], clip[1]};
  } else if (f.has("clip")) {
    f.raw("clip");
  }
  if (f.has("target")) {
    const Json& t = f.raw("target");
    if (t.is_string() && t.get<std::string>() == "auto") {
      s.target_index.reset();
    } else if (t.is_number_unsigned()) {
      s.target_index = t.get<std::size_t>();
    } else {
      bad("stream.target", "expected \"auto\" or a hypothesis index");
    }
  }
  s.alpha = f.get<double>("alpha", s.alpha);
  s.candidates = f.get<std::vector<Point>>("candidates", s.candidates);
  s.label_lo = f.get<double>("label_lo", s.label_lo);
  s.label_hi = f.get<double>("label_hi", s.label_hi);
  f.finish();

  if (!(s.noise_std >= 0.0)) bad("stream.noise_std", "must be >= 0");
  if (s.kind == "lds-sparse") {
    if (s.d == 0) bad("stream.d", "must be >= 1");
    if (s.c == 0 || s.c > s.d) bad("stream.c", "must satisfy 1 <= c <= d");
    if (!(s.spectral_radius > 0.0 && s.spectral_radius < 1.0)) {
      bad("stream.spectral_radius", "must lie in (0, 1)");
    }
  }
  if (s.kind == "iid-uniform" && s.d == 0) bad("stream.d", "must be >= 1");
  if (s.kind == "explicit-csv" && s.path.empty()) bad("stream.path", "required for explicit-csv");
  if (s.kind == "rademacher-hard") {
    if (!(s.alpha > 0.0)) bad("stream.alpha", "must be positive");
    if (s.candidates.empty()) bad("stream.candidates", "required for rademacher-hard");
  }
  if (s.kind == "lds-rotation" && !(s.radius >= 0.0 && s.radius <= 0.5)) {
    bad("stream.radius", "must lie in [0, 0.5]");
  }
  return s;
}

LearnerConfig parse_learner(const Json& j) {
  Fields f(j, "learner");
  LearnerConfig l;
  l.kind = f.get<std::string>("kind", l.kind);
  if (l.kind != "class-mwa" && l.kind != "transductive" && !parse_augmented_kind(l.kind)) {
    bad("learner.kind", "unknown learner kind '" + l.kind + "'");
  }
  if (l.kind != "class-mwa" && l.kind != "transductive") {
    l.augmented.kind = *parse_augmented_kind(l.kind);
  }
  l.alpha = f.get<double>("alpha", l.alpha);
  if (!(l.alpha >= 0.0)) bad("learner.alpha", "must be >= 0");
  l.mode = parse_mode(f.get<std::string>("mode", mode_name(l.mode)), "learner.mode");
  if (f.has("cover")) {
    Fields cf(f.raw("cover"), "learner.cover");
    const std::string policy = cf.get<std::string>("policy", "midrange");
    if (policy == "midrange") {
      l.cover.policy = CenterPolicy::midrange;
    } else if (policy == "trace-only") {
      l.cover.policy = CenterPolicy::trace_only;
    } else {
      bad("learner.cover.policy", "expected 'midrange' or 'trace-only'");
    }
    l.cover.exact = cf.get<bool>("exact", l.cover.exact);
    l.cover.exact_threshold = cf.get<std::size_t>("exact_threshold", l.cover.exact_threshold);
    cf.finish();
  }
  auto& a = l.augmented;
  a.epsilon = f.optional<double>("epsilon");
  a.pieces = f.optional<std::size_t>("c");
  a.eps_grid = f.get<std::vector<double>>("eps_grid", a.eps_grid);
  a.kappa = f.get<double>("kappa", a.kappa);
  a.grid = parse_grid(f.get<std::string>("grid", grid_name(a.grid)), "learner.grid");
  a.full_grid_limit = f.get<std::size_t>("full_grid_limit", a.full_grid_limit);
  a.meta_mode = parse_mode(f.get<std::string>("meta_mode", mode_name(a.meta_mode)),
                           "learner.meta_mode");
  f.finish();
  return l;
}

LossConfig parse_loss(const Json& j) {
  Fields f(j, "loss");
  LossConfig l;
  const std::string kind = f.get<std::string>("kind", "l1");
  if (kind != "l1") bad("loss.kind", "only 'l1' is configurable from JSON");
  if (f.has("normalization_bound")) {
    const Json& b = f.raw("normalization_bound");
    if (b.is_string() && b.get<std::string>() == "auto") {
      l.normalization_bound.reset();
    } else if (b.is_number()) {
      l.normalization_bound = b.get<double>();
      if (!(*l.normalization_bound > 0.0)) bad("loss.normalization_bound", "must be positive");
    } else {
      bad("loss.normalization_bound", "expected \"auto\" or a positive number");
    }
  }
  l.clamp = f.get<bool>("clamp", l.clamp);
  f.finish();
  return l;
}

}  // namespace

ClassConfig parse_class(const Json& j, const std::string& where) {
  Fields f(j, where);
  ClassConfig c;
  c.kind = f.get<std::string>("kind", c.kind);
  static const std::set<std::string> kinds{"junta", "bv", "ramp", "constants", "thresholds"};
  if (!kinds.count(c.kind)) bad(where + ".kind", "unknown class kind '" + c.kind + "'");
  c.d = f.get<std::size_t>("d", c.d);
  c.c = f.get<std::size_t>("c", c.c);
  if (f.has("support")) {
    const Json& s = f.raw("support");
    if (s.is_string()) {
      c.support = s.get<std::string>();
      if (c.support != "stream" && c.support != "all") {
        bad(where + ".support", "expected \"stream\", \"all\" or a list of coordinates");
      }
    } else if (s.is_array()) {
      c.support = "list";
      try {
        c.support_list = s.get<std::vector<std::size_t>>();
      } catch (const nlohmann::json::exception&) {
        bad(where + ".support", "coordinates must be non-negative integers");
      }
    } else {
      bad(where + ".support", "expected \"stream\", \"all\" or a list of coordinates");
    }
  }
  c.variation = f.get<double>("V", c.variation);
  c.cells = f.get<std::size_t>("cells", c.cells);
  c.steps = f.get<std::size_t>("steps", c.steps);
  c.coordinate = f.get<std::size_t>("coordinate", c.coordinate);
  c.slope = f.get<double>("M", c.slope);
  c.count = f.get<std::size_t>("count", c.count);
  c.a_lo = f.get<double>("a_lo", c.a_lo);
  c.a_hi = f.get<double>("a_hi", c.a_hi);
  c.values = f.get<std::vector<double>>("values", c.values);
  f.finish();
  if (c.kind == "junta" && (c.c == 0 || c.c > c.d)) bad(where + ".c", "must satisfy 1 <= c <= d");
  if ((c.kind == "constants" || c.kind == "thresholds") && c.values.empty()) {
    bad(where + ".values", "must be non-empty");
  }
  return c;
}

PredictorConfig parse_predictor(const Json& j, const std::string& where) {
  Fields f(j, where);
  PredictorConfig p;
  p.kind = f.get<std::string>("kind", p.kind);
  static const std::set<std::string> kinds{"perfect", "repeat-last", "lds", "corrupted",
                                           "shifted"};
  if (!kinds.count(p.kind)) bad(where + ".kind", "unknown predictor kind '" + p.kind + "'");
  p.identification_rounds = f.get<std::size_t>("identification_rounds", p.identification_rounds);
  p.rate = f.get<double>("rate", p.rate);
  if (f.has("rounds")) {
    p.rounds = f.get<std::vector<std::size_t>>("rounds", {});
    p.explicit_rounds = true;
  }
  p.magnitude = f.get<double>("magnitude", p.magnitude);
  p.delta = f.get<double>("delta", p.delta);
  p.metric = parse_metric(f.get<std::string>("metric", metric_name(p.metric)), where + ".metric");
  f.finish();
  if (!(p.rate >= 0.0 && p.rate <= 1.0)) bad(where + ".rate", "must lie in [0, 1]");
  return p;
}

ExperimentConfig parse_config(const Json& j) {
  Fields f(j, "config");
  ExperimentConfig cfg;
  cfg.horizon = f.get<std::size_t>("T", cfg.horizon);
  cfg.repetitions = f.get<std::size_t>("repetitions", cfg.repetitions);
  cfg.master_seed = f.get<std::uint64_t>("master_seed", cfg.master_seed);
  if (f.has("stream")) cfg.stream = parse_stream(f.raw("stream"));
  if (f.has("class")) cfg.cls = parse_class(f.raw("class"));
  if (f.has("learner")) cfg.learner = parse_learner(f.raw("learner"));
  if (f.has("predictor")) cfg.predictor = parse_predictor(f.raw("predictor"));
  if (f.has("loss")) cfg.loss = parse_loss(f.raw("loss"));
  const std::string baseline = f.get<std::string>("baseline", "final-minimizer");
  if (baseline == "final-minimizer") {
    cfg.baseline = BaselineMode::final_minimizer_prefix;
  } else if (baseline == "prefix-best") {
    cfg.baseline = BaselineMode::prefix_best;
  } else {
    bad("config.baseline", "expected 'final-minimizer' or 'prefix-best'");
  }
  cfg.output_path = f.get<std::string>("output_path", cfg.output_path);
  f.finish();

  if (cfg.horizon == 0) bad("config.T", "must be >= 1");
  if (cfg.repetitions == 0) bad("config.repetitions", "must be >= 1");
  if (is_augmented(cfg.learner.kind)) cfg.learner.augmented.validate(cfg.horizon);
  if (cfg.cls.kind == "junta" && cfg.stream.kind == "lds-sparse" && cfg.cls.d != cfg.stream.d) {
    bad("class.d", "must equal stream.d");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

Json class_to_json(const ClassConfig& c) {
  Json j;
  j["kind"] = c.kind;
  if (c.kind == "junta") {
    j["d"] = c.d;
    j["c"] = c.c;
    if (c.support == "list") {
      j["support"] = c.support_list;
    } else {
      j["support"] = c.support;
    }
  } else if (c.kind == "bv") {
    j["V"] = c.variation;
    j["cells"] = c.cells;
    j["steps"] = c.steps;
    j["coordinate"] = c.coordinate;
  } else if (c.kind == "ramp") {
    j["M"] = c.slope;
    j["count"] = c.count;
    j["a_lo"] = c.a_lo;
    j["a_hi"] = c.a_hi;
    j["coordinate"] = c.coordinate;
  } else {
    j["values"] = c.values;
  }
  return j;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["T"] = cfg.horizon;
  j["repetitions"] = cfg.repetitions;
  j["master_seed"] = cfg.master_seed;

  const StreamConfig& s = cfg.stream;
  Json st;
  st["kind"] = s.kind;
  if (s.kind == "lds-sparse") {
    st["d"] = s.d;
    st["c"] = s.c;
    st["spectral_radius"] = s.spectral_radius;
    st["init"] = {s.init_lo, s.init_hi};
  } else if (s.kind == "lds-rotation") {
    st["angle"] = s.angle;
    st["radius"] = s.radius;
    st["phase"] = s.phase;
  } else if (s.kind == "iid-uniform") {
    st["d"] = s.d;
    st["lo"] = s.lo;
    st["hi"] = s.hi;
  } else if (s.kind == "explicit-csv") {
    st["path"] = s.path;
  } else {
    st["alpha"] = s.alpha;
    st["candidates"] = s.candidates;
    st["label_lo"] = s.label_lo;
    st["label_hi"] = s.label_hi;
  }
  if (s.kind != "explicit-csv" && s.kind != "rademacher-hard") {
    st["noise_std"] = s.noise_std;
    if (s.target_index) {
      st["target"] = *s.target_index;
    } else {
      st["target"] = "auto";
    }
  }
  if (s.clip) {
    st["clip"] = {s.clip->lo, s.clip->hi};
  } else {
    st["clip"] = nullptr;
  }
  j["stream"] = st;
  j["class"] = class_to_json(cfg.cls);

  const LearnerConfig& l = cfg.learner;
  Json lj;
  lj["kind"] = l.kind;
  lj["mode"] = mode_name(l.mode);
  if (l.kind != "class-mwa") {
    lj["alpha"] = l.alpha;
    lj["cover"] = {{"policy", l.cover.policy == CenterPolicy::midrange ? "midrange" : "trace-only"},
                   {"exact", l.cover.exact},
                   {"exact_threshold", l.cover.exact_threshold}};
  }
  if (is_augmented(l.kind)) {
    const auto& a = l.augmented;
    if (a.epsilon) lj["epsilon"] = *a.epsilon;
    if (a.pieces) lj["c"] = *a.pieces;
    if (a.kind == AugmentedKind::alg4_meta || a.kind == AugmentedKind::alg6_meta_eps ||
        a.kind == AugmentedKind::eps_grid_meta) {
      lj["grid"] = grid_name(a.grid);
      lj["full_grid_limit"] = a.full_grid_limit;
      lj["meta_mode"] = mode_name(a.meta_mode);
    }
    if (a.kind == AugmentedKind::eps_grid_meta) {
      lj["eps_grid"] = a.eps_grid;
      lj["kappa"] = a.kappa;
    }
  }
  j["learner"] = lj;

  if (is_augmented(l.kind)) {
    const PredictorConfig& p = cfg.predictor;
    Json pj;
    pj["kind"] = p.kind;
    if (p.kind == "lds") pj["identification_rounds"] = p.identification_rounds;
    if (p.kind == "corrupted") {
      if (p.explicit_rounds) {
        pj["rounds"] = p.rounds;
      } else {
        pj["rate"] = p.rate;
      }
      pj["magnitude"] = p.magnitude;
    }
    if (p.kind == "shifted") pj["delta"] = p.delta;
    pj["metric"] = metric_name(p.metric);
    j["predictor"] = pj;
  }

  Json loss;
  loss["kind"] = "l1";
  if (cfg.loss.normalization_bound) {
    loss["normalization_bound"] = *cfg.loss.normalization_bound;
  } else {
    loss["normalization_bound"] = "auto";
  }
  loss["clamp"] = cfg.loss.clamp;
  j["loss"] = loss;
  j["baseline"] =
      cfg.baseline == BaselineMode::final_minimizer_prefix ? "final-minimizer" : "prefix-best";
  j["output_path"] = cfg.output_path;
  return j;
}

bool is_augmented(const std::string& learner_kind) {
  return parse_augmented_kind(learner_kind).has_value();
}

FunctionClass build_class(const ClassConfig& c, std::span<const Point> points) {
  const std::size_t dim = points.empty() ? c.d : points.front().size();
  if (c.kind == "junta") {
    if (dim != c.d) {
      throw InvalidInput("field 'class.d': class dimension " + std::to_string(c.d) +
                         " differs from the stream dimension " + std::to_string(dim));
    }
    if (c.support == "all") return appendix_class(c.d, c.c);
    std::vector<std::size_t> support = c.support_list;
    if (c.support == "stream") {
      support.clear();
      for (std::size_t i = 0; i < dim; ++i) {
        for (const Point& p : points) {
          if (p[i] != 0.0) {
            support.push_back(i);
            break;
          }
        }
      }
      // A support smaller than c is padded with the lowest unused coordinates.
      for (std::size_t i = 0; i < dim && support.size() < c.c; ++i) {
        if (std::find(support.begin(), support.end(), i) == support.end()) support.push_back(i);
      }
      if (support.size() != c.c) {
        throw InvalidInput("field 'class.support': stream support has " +
                           std::to_string(support.size()) + " coordinates, class.c is " +
                           std::to_string(c.c));
      }
    }
    return appendix_class(c.d, c.c, support);
  }
  if (c.kind == "bv") return bv_class(c.variation, c.cells, c.steps, dim, c.coordinate);
  if (c.kind == "ramp") return ramp_class(c.slope, c.count, c.a_lo, c.a_hi, dim, c.coordinate);
  if (c.kind == "constants") return constant_class(c.values, dim);
  if (dim != 1) throw InvalidInput("field 'class.kind': thresholds need a 1-dimensional stream");
  return threshold_class(c.values);
}

}  // namespace olr

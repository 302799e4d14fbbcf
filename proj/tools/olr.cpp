#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "olr/complexity.hpp"
#include "olr/config.hpp"
#include "olr/experiment.hpp"
#include "olr/predictors.hpp"
#include "olr/streams.hpp"
#include "olr/suites.hpp"

namespace fs = std::filesystem;
using namespace olr;

namespace {

// Output paths without a directory land in $OLR_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& arg) {
  fs::path p(arg);
  const char* dir = std::getenv("OLR_OUTPUT_DIR");
  if (dir && *dir && !p.has_parent_path() && !p.is_absolute()) p = fs::path(dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

// A spec is inline JSON or the path of a JSON file.
Json read_spec(const std::string& spec, const std::string& what) {
  const auto first = spec.find_first_not_of(" \t\n");
  if (first != std::string::npos && spec[first] == '{') {
    try {
      return Json::parse(spec);
    } catch (const Json::parse_error& e) {
      throw InvalidInput(what + ": invalid JSON: " + e.what());
    }
  }
  std::ifstream in(spec);
  if (!in) throw InvalidInput(what + ": cannot open '" + spec + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(what + " '" + spec + "': invalid JSON: " + e.what());
  }
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string point_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + short_double(p[i]);
  return s + ")";
}

int cmd_simulate(const std::string& config, const std::string& out,
                 const std::optional<std::uint64_t>& seed, bool per_rep) {
  ExperimentConfig cfg = load_config(config);
  if (seed) cfg.master_seed = *seed;
  std::string target = out.empty() ? cfg.output_path : out;
  if (target.empty()) throw InvalidInput("field 'output_path': no --out given and none configured");
  const fs::path csv = output_path(target);
  const ExperimentResult r = run_experiment(cfg);
  write_outputs(r, csv, per_rep);
  std::cout << "wrote " << csv.string() << " (" << r.reps.size() << " reps, T=" << r.rounds
            << ", final mean regret " << format_double(r.mean_regret.back()) << ")\n";
  return 0;
}

int cmd_dim(const std::string& class_spec, double alpha, const std::string& points_csv,
            std::size_t max_m) {
  const std::vector<Point> points = read_points_csv(points_csv);
  const FunctionClass cls = build_class(parse_class(read_spec(class_spec, "class")), points);
  const FatShatteringResult fat = fat_shattering_dim(cls, points, alpha, max_m);
  const CoverOptions greedy{CenterPolicy::midrange, false};
  const CoverResult cover = covering_number_linf(cls, points, alpha, greedy);
  const CoverResult trace =
      covering_number_linf(cls, points, alpha, {CenterPolicy::trace_only, false});

  std::printf("%-28s %s\n", "class", cls.name().c_str());
  std::printf("%-28s %zu\n", "class size", cls.size());
  std::printf("%-28s %zu\n", "points", points.size());
  std::printf("%-28s %s\n", "alpha", short_double(alpha).c_str());
  std::printf("%-28s %zu%s\n", "fat-shattering dimension", fat.dimension,
              fat.lower_bound_only ? " (lower bound, search capped)" : "");
  std::printf("%-28s %zu\n", "distinct traces", cover.distinct_traces);
  std::printf("%-28s %zu%s\n", "cover size (midrange)", cover.size, cover.exact ? " exact" : " greedy");
  std::printf("%-28s %zu%s\n", "cover size (trace-only)", trace.size, trace.exact ? " exact" : " greedy");
  if (fat.dimension > 0) {
    std::printf("\ncertificate (verified: %s)\n", verify_certificate(cls, fat.certificate) ? "yes" : "no");
    std::printf("%-4s %-32s %s\n", "i", "point", "witness");
    for (std::size_t i = 0; i < fat.certificate.size(); ++i) {
      std::printf("%-4zu %-32s %s\n", i, point_string(fat.certificate.points[i]).c_str(),
                  short_double(fat.certificate.witness[i]).c_str());
    }
    std::printf("%-8s %s\n", "pattern", "hypothesis");
    for (std::size_t mask = 0; mask < fat.certificate.realizing.size(); ++mask) {
      std::string bits;
      for (std::size_t i = 0; i < fat.certificate.size(); ++i) bits += (mask >> i) & 1 ? '+' : '-';
      std::printf("%-8s %zu\n", bits.c_str(), fat.certificate.realizing[mask]);
    }
  }
  return 0;
}

int cmd_cover(const std::string& class_spec, const std::string& sequence, double alpha, bool exact,
              const std::string& policy) {
  const std::vector<Point> points = read_points_csv(sequence);
  const FunctionClass cls = build_class(parse_class(read_spec(class_spec, "class")), points);
  CoverOptions opts;
  opts.exact = exact;
  if (policy == "trace-only") {
    opts.policy = CenterPolicy::trace_only;
  } else if (policy != "midrange") {
    throw InvalidInput("--policy must be 'midrange' or 'trace-only'");
  }
  const CoverResult r = covering_number_linf(cls, points, alpha, opts);
  std::printf("%-20s %zu\n", "class size", cls.size());
  std::printf("%-20s %zu\n", "distinct traces", r.distinct_traces);
  std::printf("%-20s %zu\n", "cover size", r.size);
  std::printf("%-20s %s\n", "method", r.exact ? "exact" : "greedy (upper bound)");
  return 0;
}

int cmd_mistakes(const std::string& predictor_spec, const std::string& stream_csv,
                 const std::vector<double>& eps, std::uint64_t seed) {
  const std::vector<Point> points = read_points_csv(stream_csv);
  if (points.empty()) throw InvalidInput("stream '" + stream_csv + "' has no rows");
  const PredictorConfig p = parse_predictor(read_spec(predictor_spec, "predictor"));
  auto factory = predictor_source(p, points, seed)(MissCriterion{});
  PredictorPtr pred = factory(0, points.size(), seed);
  const MistakeLog log = mistake_metrics(*pred, points, eps, p.metric);
  std::printf("%-16s %s\n", "metric", "misses");
  std::printf("%-16s %zu\n", "zero-one", log.zero_one_count);
  for (const auto& [e, count] : log.eps_ball_counts) {
    std::printf("%-16s %zu\n", ("eps=" + short_double(e)).c_str(), count);
  }
  return 0;
}

int cmd_figure1(const std::string& out, std::uint64_t seed) {
  const fs::path dir = output_path(out);
  const Figure1Result r = reproduce_figure1(seed);
  write_figure1(r, dir);
  std::cout << figure1_summary(r).dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& suite) {
  bool all = true;
  for (const CriterionResult& r : run_suite(suite)) {
    std::cout << format_result(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online regression simulator and bound checks"};
  app.require_subcommand(1);

  std::string config, out, class_spec, points, sequence, predictor, stream, suite, policy = "midrange";
  std::optional<std::uint64_t> seed;
  std::uint64_t fig_seed = kFigure1Seed, pred_seed = 1;
  bool per_rep = false, exact = false;
  double alpha = 0.0;
  std::size_t max_m = kMaxShatterSearch;
  std::vector<double> eps;

  auto* sim = app.add_subcommand("simulate", "Run an experiment config and write CSV plus sidecar");
  sim->add_option("--config", config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out, "Output CSV (default: config output_path)");
  sim->add_option("--seed", seed, "Override master_seed");
  sim->add_flag("--per-rep", per_rep, "Add per-repetition columns");

  auto* dim = app.add_subcommand("dim", "Fat-shattering dimension and covering numbers");
  dim->add_option("--class", class_spec, "Class spec (JSON or file)")->required();
  dim->add_option("--alpha", alpha, "Scale")->required()->check(CLI::PositiveNumber);
  dim->add_option("--points", points, "Candidate points CSV")->required()->check(CLI::ExistingFile);
  dim->add_option("--max-m", max_m, "Largest set size searched");

  auto* cov = app.add_subcommand("cover", "l-infinity covering number on a sequence");
  cov->add_option("--class", class_spec, "Class spec (JSON or file)")->required();
  cov->add_option("--sequence", sequence, "Sequence CSV")->required()->check(CLI::ExistingFile);
  cov->add_option("--alpha", alpha, "Scale")->required()->check(CLI::NonNegativeNumber);
  cov->add_flag("--exact", exact, "Exact minimum cover when small enough");
  cov->add_option("--policy", policy, "midrange or trace-only");

  auto* mis = app.add_subcommand("mistakes", "Count predictor misses on a stream");
  mis->add_option("--predictor", predictor, "Predictor spec (JSON or file)")->required();
  mis->add_option("--stream", stream, "Stream CSV")->required()->check(CLI::ExistingFile);
  mis->add_option("--eps", eps, "Epsilon grid")->required()->delimiter(',');
  mis->add_option("--seed", pred_seed, "Seed for randomized predictors");

  auto* fig = app.add_subcommand("reproduce-figure1", "Run both appendix nets");
  fig->add_option("--out", out, "Output directory")->required();
  fig->add_option("--seed", fig_seed, "Master seed");

  auto* ver = app.add_subcommand("verify-bounds", "Run acceptance suites");
  ver->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return app.exit(e);
  }

  try {
    if (*sim) return cmd_simulate(config, out, seed, per_rep);
    if (*dim) return cmd_dim(class_spec, alpha, points, max_m);
    if (*cov) return cmd_cover(class_spec, sequence, alpha, exact, policy);
    if (*mis) return cmd_mistakes(predictor, stream, eps, pred_seed);
    if (*fig) return cmd_figure1(out, fig_seed);
    if (*ver) return cmd_verify(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

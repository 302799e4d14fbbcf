#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "olr/experiment.hpp"

namespace olr {

struct CriterionResult {
  int id = 0;
  std::string suite;
  bool passed = false;
  std::string detail;
};

/// One "criterion N [suite] PASS|FAIL detail" line.
std::string format_result(const CriterionResult& r);

/// Suite names accepted by run_suite, in criterion order, plus "all".
const std::vector<std::string>& suite_names();

/// Runs one named suite (or "all"). Throws InvalidInput for unknown names.
std::vector<CriterionResult> run_suite(const std::string& name);

// Individual criteria.
CriterionResult check_figure1();
CriterionResult check_mwa();
CriterionResult check_transductive();
CriterionResult check_consistency();
CriterionResult check_restarts();
CriterionResult check_lemma_basic();
CriterionResult check_lemma_mwa();
CriterionResult check_eps_lipschitz();
CriterionResult check_scaling();
CriterionResult check_lower_bound();
CriterionResult check_dimension();
CriterionResult check_determinism();

// ---- appendix reproduction --------------------------------------------------

inline constexpr std::uint64_t kFigure1Seed = 1;

/// Appendix setup: d = 8, c = 4, T = 1000, noise std 0.1, l1 loss, 10 reps.
/// restricted: transductive MWA on the junta net over the stream's support;
/// otherwise plain MWA over the whole net.
ExperimentConfig figure1_config(bool restricted, std::uint64_t seed = kFigure1Seed);

struct Figure1Result {
  ExperimentResult full;
  ExperimentResult restricted;

  double gap(std::size_t t) const;  // full - restricted mean cumulative loss at round t (1-based)
};

Figure1Result reproduce_figure1(std::uint64_t seed = kFigure1Seed);

/// full_net.csv, restricted_net.csv (each with a sidecar) and summary.json.
void write_figure1(const Figure1Result& r, const std::filesystem::path& dir);
Json figure1_summary(const Figure1Result& r);

}  // namespace olr

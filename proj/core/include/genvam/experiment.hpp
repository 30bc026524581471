#pragma once

// Experiment configs (JSON), the end-to-end run and its artifacts.

#include "genvam/iteration.hpp"
#include "genvam/rates.hpp"
#include "genvam/verdict.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace genvam {

/// Invalid config; what() starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Rate identifiers understood by the runner, with a one-line description.
std::vector<std::pair<std::string, std::string>> rate_catalog();

struct RateRequest {
  std::string id;
  std::uint64_t k_max = 20;
  std::vector<std::uint64_t> m;       ///< T_m columns for the *_tm_* rates
  std::vector<std::uint64_t> L;       ///< windows for lmeta
  std::string source;                 ///< lmeta: the asymptotic regularity rate it is built from
  LambdaVariant variant = LambdaVariant::ResForward;
  std::uint64_t p_max = 200;          ///< gamma: largest p in the Cauchy check
};

struct MetaOptions {
  std::vector<std::uint64_t> ks{0, 1, 2};
  std::vector<Counter> gallery;
  std::optional<Nat> M;               ///< defaults to 3K
  Nat ceiling{1'000'000'000'000LL};
  std::uint64_t max_steps = EvalBudget::kDefaultMaxSteps;
};

struct AxiomOptions {
  std::uint64_t samples = 10'000;
  double tol = 1e-9;
};

struct ResOptions {
  std::uint64_t points = 1000;
  std::uint64_t max_index = 50;
  double tol = 1e-9;
};

struct ExperimentConfig {
  explicit ExperimentConfig(IterationConfig it) : iter(std::move(it)) {}

  std::string name;
  std::uint64_t seed = 1;
  IterationConfig iter;
  Rational contraction_alpha = 0;
  std::optional<std::uint64_t> iterations;  ///< empty: derived from the requested rates
  std::uint64_t max_iterations = 1'000'000;
  double slack = 1e-9;
  Nat ceiling{1'000'000'000'000LL};
  std::uint64_t max_steps = EvalBudget::kDefaultMaxSteps;
  std::vector<RateRequest> rates;
  MetaOptions meta;
  bool check_invariants = true;
  bool check_schedule = true;
  std::optional<AxiomOptions> axioms;
  std::optional<ResOptions> res;
  bool partial_is_pass = false;
  std::filesystem::path out_dir;
};

/// Parses and validates; throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

/// Builds every requested rate; a missing witness or constant raises ConfigError.
RateBundle build_rates(const ExperimentConfig& c, const BoundConstant& K);

struct ExperimentResult {
  std::string name;
  BoundConstant K;
  RateBundle bundle;
  Trace trace;
  std::vector<Verdict> verdicts;
  std::string trace_csv;
  std::string bounds_csv;
  std::string report_text;
  std::string report_json;
  int exit_code = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& c);

/// Axioms of the space, Res and nonexpansiveness of the family, contraction property of f.
std::vector<Verdict> run_structure_checks(const ExperimentConfig& c);

/// 0 pass, 1 any fail, 2 partial without fail (0 when partial counts as pass).
int exit_code(const std::vector<Verdict>& verdicts, bool partial_is_pass);

inline constexpr int kExitConfigError = 3;

/// Writes trace.csv, bounds.csv, report.txt and report.json into dir.
void write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir);

/// Human-readable and JSON summaries of a list of verdicts.
std::string render_verdicts(const std::vector<Verdict>& verdicts);
std::string verdicts_json(const std::vector<Verdict>& verdicts);

}  // namespace genvam

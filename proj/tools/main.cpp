// genvam: run experiments and check the rate certificates they produce.

#include "genvam/experiment.hpp"
#include "genvam/moduli_suite.hpp"
#include "genvam/schedule.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace {

using namespace genvam;

int run(const std::string& path, const std::string& out, bool partial_is_pass, bool quiet) {
  ExperimentConfig c = load_config(path);
  if (partial_is_pass) c.partial_is_pass = true;
  const std::filesystem::path dir = out.empty() ? c.out_dir : std::filesystem::path(out);
  const ExperimentResult r = run_experiment(c);
  write_artifacts(r, dir);
  if (!quiet) std::cout << r.report_text;
  std::cout << "artifacts in " << dir.string() << "\n";
  return r.exit_code;
}

int check_axioms(const std::string& path, std::uint64_t samples, bool json) {
  ExperimentConfig c = load_config(path);
  if (samples > 0) {
    AxiomOptions a = c.axioms.value_or(AxiomOptions{});
    a.samples = samples;
    c.axioms = a;
  }
  const std::vector<Verdict> v = run_structure_checks(c);
  std::cout << (json ? verdicts_json(v) + "\n" : render_verdicts(v));
  return exit_code(v, false);
}

int check_moduli(const SuiteOptions& opt, bool json) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Verdict> v = run_moduli_suite(opt);
  v.push_back(run_sabach_shtern_suite(opt.seed));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (json) {
    std::cout << verdicts_json(v) << "\n";
  } else {
    std::cout << render_verdicts(v) << "  " << secs << " s\n";
  }
  return exit_code(v, false);
}

void list_presets() {
  std::cout << "schedules\n";
  for (const auto& [name, text] : preset_catalog()) std::cout << "  " << name << "  " << text << "\n";
  std::cout << "rates\n";
  for (const auto& [id, text] : rate_catalog()) std::cout << "  " << id << "  " << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genVAM / HPPA rate verifier"};
  app.require_subcommand(1);

  std::string config, out;
  bool partial_is_pass = false, quiet = false, json = false;
  std::uint64_t samples = 0;
  SuiteOptions suite;

  auto* run_cmd = app.add_subcommand("run", "Run a config and verify every requested rate");
  run_cmd->add_option("config", config, "JSON config")->required();
  run_cmd->add_option("-o,--out", out, "Output directory (default from the config)");
  run_cmd->add_flag("--partial-is-pass", partial_is_pass, "Exit 0 when the only non-pass verdicts are partial");
  run_cmd->add_flag("-q,--quiet", quiet, "Do not print the report");

  auto* ax_cmd = app.add_subcommand("check-axioms", "Check the space axioms, Res and the contraction for a config");
  ax_cmd->add_option("config", config, "JSON config")->required();
  ax_cmd->add_option("--samples", samples, "Axiom samples (default from the config)");
  ax_cmd->add_flag("--json", json, "Print verdicts as JSON");

  auto* mod_cmd = app.add_subcommand("check-moduli", "Run the synthetic combinator suite");
  mod_cmd->add_option("--seed", suite.seed, "Seed");
  mod_cmd->add_option("--cases", suite.cases, "Synthetic cases per combinator");
  mod_cmd->add_option("--horizon", suite.horizon, "Largest k and window offset checked");
  mod_cmd->add_flag("--json", json, "Print verdicts as JSON");

  auto* list_cmd = app.add_subcommand("list-presets", "List schedule presets and rate identifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*run_cmd) return run(config, out, partial_is_pass, quiet);
    if (*ax_cmd) return check_axioms(config, samples, json);
    if (*mod_cmd) return check_moduli(suite, json);
    if (*list_cmd) {
      list_presets();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

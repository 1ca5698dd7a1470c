// vdc command-line tool.
//
//   vdc compute    --defaults                 closed-form (V, D, C) per scenario
//   vdc fringes    --config scenarios.json    exact and shot-noise fringe data
//   vdc experiment --defaults --seed 42       full simulated experiment report
//   vdc sphere     --defaults --format json   unit-sphere point cloud
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include "vdc/vdc.hpp"

#ifdef VDC_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct Options {
  std::string config;
  bool defaults = false;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string out = "-";
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Options& opt, bool sampling) {
  cmd->add_option("--config", opt.config, "Scenario file (JSON)");
  cmd->add_flag("--defaults", opt.defaults, "Use the built-in seven illustrative scenarios");
  if (sampling) {
    cmd->add_option("--shots", opt.shots, "Override shots per phase point / arm / setting");
    cmd->add_option("--seed", opt.seed, "Override every scenario's seed");
  }
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out, "Output path, '-' for standard output");
}

std::vector<vdc::Scenario> scenarios_from(const Options& opt) {
  if (opt.defaults == !opt.config.empty()) {
    throw vdc::ValidationError("give exactly one of --config <file> or --defaults");
  }
  std::vector<vdc::Scenario> list = opt.defaults ? vdc::default_scenarios() : vdc::load_scenarios(opt.config);
  for (auto& sc : list) {
    if (opt.shots) sc.shots = *opt.shots;
    if (opt.seed) sc.seed = *opt.seed;
    vdc::validate(sc);
  }
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visibility / distinguishability / concurrence simulator"};
  app.require_subcommand(1);

  Options opt;
  auto* compute = app.add_subcommand("compute", "Closed-form triples, no sampling");
  auto* fringes = app.add_subcommand("fringes", "Dump exact and shot-noise fringe scans");
  auto* experiment = app.add_subcommand("experiment", "Run the full simulated experiment");
  auto* sphere = app.add_subcommand("sphere", "Unit-sphere points from the experiment");
  add_common(compute, opt, false);
  for (auto* cmd : {fringes, experiment, sphere}) add_common(cmd, opt, true);
  for (auto* cmd : {experiment, sphere}) {
    cmd->add_option("--jobs", opt.jobs, "Worker threads for scenarios")->check(CLI::Range(1u, 256u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const auto scenarios = scenarios_from(opt);
    const vdc::ReportFormat format = vdc::parse_format(opt.format);
    std::ostringstream text;
    if (compute->parsed()) {
      vdc::emit_analytic(scenarios, format, text);
    } else if (fringes->parsed()) {
      vdc::emit_fringes(scenarios, format, text);
    } else {
      const auto reports = vdc::run_all(scenarios, opt.jobs);
      if (experiment->parsed()) {
        vdc::emit_report(reports, format, text);
      } else {
        vdc::emit_sphere(reports, format, text);
      }
    }
    vdc::write_output(opt.out, text.str());
  } catch (const vdc::IoError& e) {
    std::cerr << "vdc: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const vdc::ValidationError& e) {
    std::cerr << "vdc: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}

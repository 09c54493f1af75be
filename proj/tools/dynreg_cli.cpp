#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynreg/config.hpp"
#include "dynreg/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Online learning against drifting comparators: experiment runner"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  long seed_override = -1;
  double l_override = 0.0;
  int verbosity = 1;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config file")->required();
    sub->add_option("-o,--output-dir", output_dir,
                    "output directory (beats config key and DYNREG_OUTPUT_DIR)");
    sub->add_option("--seed", seed_override, "seed override applied to every run");
    sub->add_option("--L", l_override, "scale override (omd-static and game modes)");
    sub->add_flag_function("-v,--verbose", [&](std::int64_t n) { verbosity = 1 + static_cast<int>(n); },
                           "more per-check output");
    sub->add_flag("-q,--quiet", quiet, "suppress per-check output");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run each experiment and verify its bounds");
  CLI::App* cmd_cmp = app.add_subcommand("compare", "summary table across experiments");
  add_common(cmd_run);
  add_common(cmd_cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto configs = dynreg::parse_config_file(config_path);
    for (auto& c : configs) {
      if (seed_override >= 0) c.seed = static_cast<std::uint64_t>(seed_override);
      if (l_override > 0.0) c.scale = l_override;
      c.output_dir = dynreg::resolve_output_dir(c, output_dir);
      dynreg::validate_config(c);
    }
    if (quiet) verbosity = 0;

    std::vector<dynreg::ExperimentResult> results;
    if (cmd_run->parsed()) {
      results.reserve(configs.size());
      for (const auto& c : configs)
        results.push_back(dynreg::run_experiment(c, std::cout, verbosity));
    } else {
      results = dynreg::compare_scenarios(configs, std::cout, verbosity - 1);
      dynreg::write_summary_table(results, std::cout);
    }
    return dynreg::exit_status(results);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dynreg/aomd.hpp"
#include "dynreg/config.hpp"
#include "dynreg/game.hpp"

namespace dynreg {

// One inequality verdict from a run's bound report.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string status;  // PASS | FAIL | SKIP (precondition not met)
  std::string note;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<BoundCheck> checks;
  std::string trace_path, report_path;
  bool ok = true;       // run completed (compare rows keep going on errors)
  std::string error;
  long horizon = 0;
  long epochs = 0;
  double regret = 0.0, c_t = 0.0, d_t = 0.0, v_t = 0.0;
  std::string min_branch = "-";

  bool any_fail() const;
};

// Construction from a validated config.  Scenario names pick the geometry;
// seeds drive every random choice.
Scenario build_scenario(const ExperimentConfig& c);
GameSchedule build_schedule(const ExperimentConfig& c);
Predictor build_predictor(const ExperimentConfig& c);
OpponentStrategy build_opponent(const ExperimentConfig& c, const GameSchedule& sched);

// Precedence: CLI flag, config key, DYNREG_OUTPUT_DIR, current directory.
std::string resolve_output_dir(const ExperimentConfig& c, const std::string& cli_override);

// Validates, runs, writes <name>_trace.csv and <name>_bounds.csv under the
// config's output dir, and logs one line per check.  Throws before touching
// any file if the config is invalid.
ExperimentResult run_experiment(const ExperimentConfig& c, std::ostream& log,
                                int verbosity = 1);

// Runs every config, annotating failures instead of aborting.
std::vector<ExperimentResult> compare_scenarios(const std::vector<ExperimentConfig>& configs,
                                                std::ostream& log, int verbosity = 0);
void write_summary_table(const std::vector<ExperimentResult>& rows, std::ostream& out);

// 0 all pass, 1 some bound failed, 2 some run was invalid.
int exit_status(const std::vector<ExperimentResult>& results);

}  // namespace dynreg

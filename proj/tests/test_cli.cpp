#include "dynreg/config.hpp"
#include "dynreg/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

using namespace dynreg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

ExperimentConfig valid_base() {
  ExperimentConfig c;
  c.name = "x";
  c.algorithm = "aomd";
  c.scenario = "alternating-experts";
  c.horizon = 10;
  return c;
}

}  // namespace

TEST_CASE("config text: defaults, sections, comments, auto-naming") {
  const std::string text = R"(# shared defaults
T = 100
seed = 9

[run]
name = alpha
algorithm = omd-static
scenario = fixed-best-expert
L = 2.5

[run]
scenario = alternating-experts
d = 3
; trailing remark
)";
  const auto runs = parse_config_text(text, "cfg");
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].name == "alpha");
  CHECK(runs[0].algorithm == "omd-static");
  CHECK(runs[0].scenario == "fixed-best-expert");
  CHECK(runs[0].horizon == 100);
  CHECK(runs[0].seed == 9);
  CHECK(runs[0].scale == 2.5);
  CHECK(runs[1].name == "run2");  // auto-numbered by position
  CHECK(runs[1].algorithm == "aomd");
  CHECK(runs[1].horizon == 100);
  CHECK(runs[1].dim == 3);
}

TEST_CASE("config text: diagnostics carry source and line") {
  CHECK_THROWS_WITH_AS(parse_config_text("T = 5\nfrobnicate = 1\n", "cfg"),
                       doctest::Contains("cfg:2: unknown key 'frobnicate'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nT = ten\n", "cfg"),
                       doctest::Contains("cfg:2: key 'T' needs an integer"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("L = much\n", "cfg"),
                       doctest::Contains("needs a real number"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("hello\n", "cfg"),
                       doctest::Contains("expected 'key = value'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[game]\n", "cfg"),
                       doctest::Contains("unknown section"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run\n", "cfg"),
                       doctest::Contains("unterminated"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("seed = -3\n", "cfg"),
                       doctest::Contains("seed must be >= 0"), std::invalid_argument);
}

TEST_CASE("config file: loads from disk, names missing files") {
  const fs::path path = fs::temp_directory_path() / "dynreg_cfg_test.cfg";
  {
    std::ofstream out(path);
    out << "[run]\nname = fromfile\nscenario = random-linear\nT = 4\n";
  }
  const auto runs = parse_config_file(path.string());
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].name == "fromfile");
  CHECK(runs[0].horizon == 4);
  fs::remove(path);
  CHECK_THROWS_WITH_AS(parse_config_file(path.string()),
                       doctest::Contains("cannot open"), std::invalid_argument);
}

TEST_CASE("config validation: field rules and companion requirements") {
  CHECK_NOTHROW(validate_config(valid_base()));

  auto expect = [](ExperimentConfig c, const char* needle) {
    CHECK_THROWS_WITH_AS(validate_config(c), doctest::Contains(needle),
                         std::invalid_argument);
  };

  ExperimentConfig c = valid_base();
  c.algorithm = "sgd";
  expect(c, "unknown algorithm");
  expect(c, "config 'x':");

  c = valid_base();
  c.scenario = "matching-pennies";  // game scenario under a non-game algorithm
  expect(c, "unknown scenario");

  c = valid_base();
  c.algorithm = "game-honest";
  c.scenario = "alternating-experts";
  expect(c, "unknown game scenario");

  c = valid_base();
  c.algorithm = "game-honest";
  c.scenario = "matching-pennies";
  c.horizon = 0;
  expect(c, "T must be >= 1");

  c = valid_base();
  c.algorithm = "game-adversarial";
  c.scenario = "schedule-file";
  expect(c, "needs schedule_file");

  c = valid_base();
  c.algorithm = "game-adversarial";
  c.scenario = "matching-pennies";
  c.opponent = "psychic";
  expect(c, "unknown opponent");

  c = valid_base();
  c.predictor = "external";
  expect(c, "needs predictor_file");

  c = valid_base();
  c.scenario = "smooth-batch";
  c.horizon = 0;  // derived from batches x rounds_per_batch
  CHECK_NOTHROW(validate_config(c));
  c.batches = 0;
  expect(c, "batches >= 1");

  c = valid_base();
  c.dim = 1;
  expect(c, "d must be >= 2");

  c = valid_base();
  c.sigma = -0.5;
  expect(c, "sigma must be >= 0");

  c = valid_base();
  c.scale = -1.0;
  expect(c, "L must be >= 0");
}

TEST_CASE("scenario builder: seeded and reproducible") {
  ExperimentConfig c = valid_base();
  c.horizon = 10;
  Scenario sc = build_scenario(c);
  CHECK(sc.horizon() == 10);
  CHECK(sc.geometry.set.dim == 2);

  c.scenario = "smooth-batch";
  c.batches = 2;
  c.rounds_per_batch = 3;
  c.seed = 5;
  const Scenario sb1 = build_scenario(c), sb2 = build_scenario(c);
  REQUIRE(sb1.horizon() == 6);
  for (int t = 0; t < 6; ++t) CHECK(sb1.losses[t].c == sb2.losses[t].c);

  c = valid_base();
  c.scenario = "random-linear";
  c.seed = 1;
  const Scenario r1 = build_scenario(c);
  c.seed = 2;
  const Scenario r2 = build_scenario(c);
  CHECK(r1.losses[0].c != r2.losses[0].c);

  c = valid_base();
  c.scenario = "drifting-minimizer";
  c.sigma = 0.0;
  const Scenario still = build_scenario(c);
  CHECK(still.losses.front().c == still.losses.back().c);
}

TEST_CASE("schedule, predictor and opponent builders") {
  ExperimentConfig c = valid_base();
  c.algorithm = "game-honest";
  c.scenario = "matching-pennies";
  c.horizon = 7;
  GameSchedule sched = build_schedule(c);
  CHECK(sched.horizon() == 7);
  CHECK(sched.matrices[0] == GameSchedule::matching_pennies());

  c.scenario = "random-switching";
  c.rows = 2;
  c.cols = 3;
  c.switches = 2;
  sched = build_schedule(c);
  CHECK(sched.switch_count() == 2);
  CHECK(sched.cols == 3);

  const fs::path sched_path = fs::temp_directory_path() / "dynreg_cli_sched.json";
  {
    std::ofstream out(sched_path);
    out << R"({"segments": [{"matrix": [[0.0, 0.5], [-0.5, 0.0]], "rounds": 3}]})";
  }
  c.scenario = "schedule-file";
  c.schedule_file = sched_path.string();
  sched = build_schedule(c);
  CHECK(sched.horizon() == 3);
  fs::remove(sched_path);

  ExperimentConfig p = valid_base();
  p.predictor = "zero";
  CHECK(build_predictor(p).kind() == PredictorKind::Zero);
  p.predictor = "smooth-batch";
  CHECK(build_predictor(p).kind() == PredictorKind::SmoothBatchGradient);
  const fs::path pred_path = fs::temp_directory_path() / "dynreg_cli_pred.csv";
  {
    std::ofstream out(pred_path);
    out << "0.1,0.2\n0.3,0.4\n";
  }
  p.predictor = "external";
  p.predictor_file = pred_path.string();
  CHECK(build_predictor(p).kind() == PredictorKind::External);
  fs::remove(pred_path);

  // Opponents: uniform at round 1, vertex chase afterwards.
  ExperimentConfig g = valid_base();
  g.algorithm = "game-adversarial";
  g.scenario = "matching-pennies";
  g.horizon = 5;
  const GameSchedule pen = build_schedule(g);
  const Mat& a = pen.matrices[0];
  std::vector<Vec> x_hist, f_hist;
  g.opponent = "best-response";
  OpponentStrategy br = build_opponent(g, pen);
  CHECK(br(1, a, x_hist, f_hist) == Vec(Vec::Constant(2, 0.5)));
  Vec e0 = Vec::Zero(2);
  e0[0] = 1.0;
  x_hist.push_back(e0);
  CHECK(br(2, a, x_hist, f_hist) == e0);  // row 0 payoff 1 beats row 1

  g.opponent = "seeded-random";
  OpponentStrategy s1 = build_opponent(g, pen), s2 = build_opponent(g, pen);
  const Vec d1 = s1(1, a, x_hist, f_hist), d2 = s2(1, a, x_hist, f_hist);
  CHECK(d1 == d2);
  CHECK(d1.minCoeff() >= 0.0);
  CHECK(d1.sum() == doctest::Approx(1.0).epsilon(1e-12));

  g.opponent = "nobody";
  CHECK_THROWS_AS(build_opponent(g, pen), std::invalid_argument);
}

TEST_CASE("output dir: flag beats config beats environment beats cwd") {
  ExperimentConfig c;
  unsetenv("DYNREG_OUTPUT_DIR");
  CHECK(resolve_output_dir(c, "") == ".");
  setenv("DYNREG_OUTPUT_DIR", "envdir", 1);
  CHECK(resolve_output_dir(c, "") == "envdir");
  c.output_dir = "cfgdir";
  CHECK(resolve_output_dir(c, "") == "cfgdir");
  CHECK(resolve_output_dir(c, "clidir") == "clidir");
  unsetenv("DYNREG_OUTPUT_DIR");
}

TEST_CASE("run_experiment: writes trace and report, logs verdicts") {
  const fs::path dir = fresh_dir("dynreg_cli_run");
  ExperimentConfig c;
  c.name = "tiny";
  c.algorithm = "omd-static";
  c.scenario = "random-linear";
  c.horizon = 1;
  c.output_dir = dir.string();
  std::ostringstream log;
  const ExperimentResult res = run_experiment(c, log, 1);
  CHECK(res.ok);
  CHECK_FALSE(res.any_fail());
  REQUIRE(fs::exists(res.trace_path));
  REQUIRE(fs::exists(res.report_path));
  const std::string report = slurp(res.report_path);
  CHECK(report.rfind("check,lhs,rhs,status,note\n", 0) == 0);
  CHECK(report.find("FAIL") == std::string::npos);
  CHECK(log.str().find("[tiny] PASS") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run_experiment: invalid configs leave no artifacts") {
  const fs::path dir = fresh_dir("dynreg_cli_bad");
  ExperimentConfig c = valid_base();
  c.horizon = -5;
  c.output_dir = dir.string();
  std::ostringstream log;
  CHECK_THROWS_AS(run_experiment(c, log), std::invalid_argument);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path d1 = fresh_dir("dynreg_cli_det1"), d2 = fresh_dir("dynreg_cli_det2");
  ExperimentConfig c = valid_base();
  c.name = "det";
  c.horizon = 40;
  std::ostringstream log;
  c.output_dir = d1.string();
  const ExperimentResult r1 = run_experiment(c, log, 0);
  c.output_dir = d2.string();
  const ExperimentResult r2 = run_experiment(c, log, 0);
  CHECK(slurp(r1.trace_path) == slurp(r2.trace_path));
  CHECK(slurp(r1.report_path) == slurp(r2.report_path));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("compare: keeps going on errors, table and exit codes reflect them") {
  CHECK(compare_scenarios({}, std::cout, 0).empty());
  CHECK(exit_status({}) == 0);

  const fs::path dir = fresh_dir("dynreg_cli_cmp");
  ExperimentConfig good = valid_base();
  good.name = "good";
  good.horizon = 30;
  good.output_dir = dir.string();
  ExperimentConfig bad = valid_base();
  bad.name = "broken";
  bad.scenario = "nope";
  std::ostringstream log;
  const auto results = compare_scenarios({good, bad}, log, 0);
  REQUIRE(results.size() == 2);
  CHECK(results[0].ok);
  CHECK_FALSE(results[1].ok);
  CHECK(results[1].error.find("unknown scenario") != std::string::npos);
  CHECK(exit_status(results) == 2);

  std::ostringstream table;
  write_summary_table(results, table);
  CHECK(table.str().find("name") != std::string::npos);
  CHECK(table.str().find("good") != std::string::npos);
  CHECK(table.str().find("error: config 'broken'") != std::string::npos);

  std::vector<ExperimentResult> only_good(results.begin(), results.begin() + 1);
  CHECK(exit_status(only_good) == 0);
  ExperimentResult failing = results[0];
  failing.checks.push_back({"synthetic", 2.0, 1.0, "FAIL", ""});
  CHECK(failing.any_fail());
  CHECK(exit_status({failing}) == 1);
  fs::remove_all(dir);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dynreg {

// One experiment: which learner, which loss sequence or game, and the knobs
// both need.  Scenario names select the geometry implicitly (experts and
// random-linear live on the simplex, the quadratic scenarios on the unit
// ball, games on paired simplices).
struct ExperimentConfig {
  std::string name;               // output file stem; auto-numbered if empty
  std::string algorithm = "aomd"; // omd-static | aomd | game-honest | game-adversarial
  std::string scenario;
  long horizon = 0;               // T; derived for smooth-batch if 0
  int dim = 2;
  std::uint64_t seed = 1;
  double scale = 0.0;    // L; 0 picks the documented default per algorithm
  std::string predictor = "last-gradient";
  std::string predictor_file;     // predictor = external only
  double sigma = 0.01;            // drifting-minimizer step bound
  long batches = 1;               // smooth-batch
  long rounds_per_batch = 100;    // smooth-batch
  double curvature = 1.0;         // smooth-batch quadratics
  int rows = 2, cols = 2;         // game matrix shape
  int switches = 0;               // game schedule switches
  std::string schedule_file;      // game scenario schedule-file
  std::string opponent = "uniform";  // game-adversarial
  std::string output_dir;
};

// Flat key/value text: a `[run]` line opens a new experiment, `key = value`
// sets a field, `#` or `;` start comments.  Assignments before the first
// `[run]` become defaults for every experiment in the file.  Errors carry
// `source:line:` diagnostics.
std::vector<ExperimentConfig> parse_config_text(const std::string& text,
                                                const std::string& source);
std::vector<ExperimentConfig> parse_config_file(const std::string& path);

// Field-level validation (known names, positive sizes, required companions).
// Throws std::invalid_argument naming the offending field.
void validate_config(const ExperimentConfig& c);

}  // namespace dynreg

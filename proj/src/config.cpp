#include "dynreg/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynreg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw std::invalid_argument(source + ":" + std::to_string(line) + ": " + what);
}

long to_long(const std::string& source, int line, const std::string& key,
             const std::string& v) {
  try {
    std::size_t pos = 0;
    const long out = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    fail(source, line, "key '" + key + "' needs an integer, got '" + v + "'");
  }
}

double to_double(const std::string& source, int line, const std::string& key,
                 const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    fail(source, line, "key '" + key + "' needs a real number, got '" + v + "'");
  }
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value,
           const std::string& source, int line) {
  if (key == "name") c.name = value;
  else if (key == "algorithm") c.algorithm = value;
  else if (key == "scenario") c.scenario = value;
  else if (key == "T") c.horizon = to_long(source, line, key, value);
  else if (key == "d") c.dim = static_cast<int>(to_long(source, line, key, value));
  else if (key == "seed") {
    const long s = to_long(source, line, key, value);
    if (s < 0) fail(source, line, "seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "L") c.scale = to_double(source, line, key, value);
  else if (key == "predictor") c.predictor = value;
  else if (key == "predictor_file") c.predictor_file = value;
  else if (key == "sigma") c.sigma = to_double(source, line, key, value);
  else if (key == "batches") c.batches = to_long(source, line, key, value);
  else if (key == "rounds_per_batch") c.rounds_per_batch = to_long(source, line, key, value);
  else if (key == "curvature") c.curvature = to_double(source, line, key, value);
  else if (key == "rows") c.rows = static_cast<int>(to_long(source, line, key, value));
  else if (key == "cols") c.cols = static_cast<int>(to_long(source, line, key, value));
  else if (key == "switches") c.switches = static_cast<int>(to_long(source, line, key, value));
  else if (key == "schedule_file") c.schedule_file = value;
  else if (key == "opponent") c.opponent = value;
  else if (key == "output_dir") c.output_dir = value;
  else fail(source, line, "unknown key '" + key + "'");
}

bool one_of(const std::string& v, std::initializer_list<const char*> names) {
  return std::any_of(names.begin(), names.end(),
                     [&](const char* n) { return v == n; });
}

}  // namespace

std::vector<ExperimentConfig> parse_config_text(const std::string& text,
                                                const std::string& source) {
  std::vector<ExperimentConfig> runs;
  ExperimentConfig defaults;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool in_run = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(source, line, "unterminated section header");
      const std::string sect = trim(s.substr(1, s.size() - 2));
      if (sect != "run") fail(source, line, "unknown section '[" + sect + "]'");
      runs.push_back(defaults);
      in_run = true;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(source, line, "empty key");
    apply(in_run ? runs.back() : defaults, key, value, source, line);
  }
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (runs[i].name.empty()) runs[i].name = "run" + std::to_string(i + 1);
  return runs;
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void validate_config(const ExperimentConfig& c) {
  auto bad = [&](const std::string& what) {
    throw std::invalid_argument("config '" + c.name + "': " + what);
  };
  if (!one_of(c.algorithm, {"omd-static", "aomd", "game-honest", "game-adversarial"}))
    bad("unknown algorithm '" + c.algorithm + "'");
  const bool game = c.algorithm == "game-honest" || c.algorithm == "game-adversarial";
  if (game) {
    if (!one_of(c.scenario, {"matching-pennies", "random-switching", "schedule-file"}))
      bad("unknown game scenario '" + c.scenario + "'");
    if (c.scenario == "schedule-file" && c.schedule_file.empty())
      bad("scenario schedule-file needs schedule_file=");
    if (c.scenario != "schedule-file") {
      if (c.horizon < 1) bad("T must be >= 1");
      if (c.rows < 1 || c.cols < 1) bad("rows/cols must be >= 1");
      if (c.switches < 0) bad("switches must be >= 0");
    }
    if (!one_of(c.opponent, {"uniform", "seeded-random", "best-response"}))
      bad("unknown opponent '" + c.opponent + "'");
  } else {
    if (!one_of(c.scenario, {"alternating-experts", "fixed-best-expert", "smooth-batch",
                             "drifting-minimizer", "random-linear", "random-quadratic"}))
      bad("unknown scenario '" + c.scenario + "'");
    if (c.scenario == "smooth-batch") {
      if (c.batches < 1 || c.rounds_per_batch < 1)
        bad("smooth-batch needs batches >= 1 and rounds_per_batch >= 1");
      if (!(c.curvature > 0.0)) bad("curvature must be > 0");
    } else if (c.horizon < 1) {
      bad("T must be >= 1");
    }
    if (c.dim < 2) bad("d must be >= 2");
    if (c.sigma < 0.0) bad("sigma must be >= 0");
    if (!one_of(c.predictor, {"zero", "last-gradient", "smooth-batch", "external"}))
      bad("unknown predictor '" + c.predictor + "'");
    if (c.predictor == "external" && c.predictor_file.empty())
      bad("predictor external needs predictor_file=");
  }
  if (c.scale < 0.0) bad("L must be >= 0 (0 = default)");
}

}  // namespace dynreg

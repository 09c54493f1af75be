#include "dynreg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "dynreg/metrics.hpp"

namespace dynreg {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

constexpr double kBoundTol = 1e-6;        // slack on inequality checks
constexpr double kConservationTol = 1e-9; // slack on exact accounting identities

BoundCheck inequality(std::string name, double lhs, double rhs, std::string note = "") {
  BoundCheck b;
  b.name = std::move(name);
  b.lhs = lhs;
  b.rhs = rhs;
  b.status = lhs <= rhs + kBoundTol ? "PASS" : "FAIL";
  b.note = std::move(note);
  return b;
}

BoundCheck identity(std::string name, double discrepancy, std::string note = "") {
  BoundCheck b;
  b.name = std::move(name);
  b.lhs = discrepancy;
  b.rhs = kConservationTol;
  b.status = discrepancy <= kConservationTol ? "PASS" : "FAIL";
  b.note = std::move(note);
  return b;
}

BoundCheck skipped(std::string name, double lhs, double rhs, std::string note) {
  BoundCheck b;
  b.name = std::move(name);
  b.lhs = lhs;
  b.rhs = rhs;
  b.status = "SKIP";
  b.note = std::move(note);
  return b;
}

// Best fixed feasible action in hindsight: summed-cost argmin vertex for
// linear losses, the clipped curvature-weighted mean center for quadratics.
Vec best_fixed_action(const Scenario& sc) {
  const auto& losses = sc.losses;
  if (losses.front().kind == LossKind::LinearSimplex) {
    Vec total = Vec::Zero(sc.geometry.set.dim);
    for (const auto& f : losses) total += f.c;
    int best = 0;
    for (int i = 1; i < total.size(); ++i)
      if (total[i] < total[best]) best = i;
    Vec u = Vec::Zero(total.size());
    u[best] = 1.0;
    return u;
  }
  Vec weighted = Vec::Zero(sc.geometry.set.dim);
  double mass = 0.0;
  for (const auto& f : losses) {
    weighted += f.curvature * f.c;
    mass += f.curvature;
  }
  return sc.geometry.set.clip(weighted / mass);
}

// Largest prefix excess of the path-length guarantee at scale L: the bound
// must hold at every round, not just the last.
double dynamic_prefix_excess(const RunTrace& tr, double L, double gamma, double r_max_sq) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : tr.rows) {
    const double rhs = omd_dynamic_bound(L, row.d_cum, row.c_cum, gamma, r_max_sq);
    worst = std::max(worst, row.cum_dyn_regret - rhs);
  }
  return worst;
}

void check_omd_static(const ExperimentConfig& c, const Scenario& sc, ExperimentResult& res,
                      std::ostringstream& trace_out) {
  const Geometry& g = sc.geometry;
  const long T = sc.horizon();
  const GeometryConstants gc = geometry_constants(g.reg, g.set, T);
  const double R = std::sqrt(gc.r_max_sq);
  const double L0 = c.scale > 0.0 ? c.scale : R;

  std::vector<double> grid = {L0, R, 2.5 * R, 6.0 * R};
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12 * (a + b); }),
             grid.end());
  // L0 may also coincide with a later grid point.
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - grid[0]) < 1e-12 * (grid[i] + grid[0])) {
      grid.erase(grid.begin() + static_cast<long>(i));
      break;
    }

  const RunTrace* at_r = nullptr;
  std::vector<RunTrace> traces;
  traces.reserve(grid.size());
  for (const double L : grid) {
    Predictor pred = build_predictor(c);
    traces.push_back(omd_run(g, pred, sc.losses, L));
    const RunTrace& tr = traces.back();
    if (std::abs(L - R) < 1e-12 * (L + R)) at_r = &tr;
    const std::string tag = "[L=" + fmt(L) + "]";
    const ComplexityMeasures m = tr.final_measures();
    res.checks.push_back(inequality("dynamic-bound" + tag, tr.final_regret(),
                                    omd_dynamic_bound(L, m.d_t, m.c_t, gc.gamma, gc.r_max_sq),
                                    "dynamic regret vs per-round minimizers"));
    res.checks.push_back(inequality("dynamic-prefixes" + tag,
                                    dynamic_prefix_excess(tr, L, gc.gamma, gc.r_max_sq), 0.0,
                                    "max over prefixes of regret minus bound"));
    if (L > 2.0 * R)
      res.checks.push_back(inequality(
          "drift-bound" + tag, tr.final_regret(),
          omd_drift_bound(L, m.d_t, m.c_t, m.v_t, T, gc.gamma, gc.r_max_sq),
          "variability form; needs L > 2R"));
  }

  // Static recovery at the L = R tuning against the best fixed action.
  if (at_r != nullptr) {
    const Vec u = best_fixed_action(sc);
    const std::vector<Vec> comps(static_cast<std::size_t>(T), u);
    const double static_regret = dynamic_regret(sc.losses, at_r->actions, comps);
    res.checks.push_back(inequality("static-bound[L=R]", static_regret,
                                    static_regret_bound(gc.r_max_sq, at_r->final_measures().d_t),
                                    "vs best fixed action"));
  }

  const RunTrace& main = traces.front();
  const ComplexityMeasures m = main.final_measures();
  res.horizon = T;
  res.epochs = 1;
  res.regret = main.final_regret();
  res.c_t = m.c_t;
  res.d_t = m.d_t;
  res.v_t = m.v_t;
  write_trace_csv(main, trace_out);
}

void check_aomd(const ExperimentConfig& c, const Scenario& sc, ExperimentResult& res,
                std::ostringstream& trace_out) {
  const Geometry& g = sc.geometry;
  const long T = sc.horizon();
  const GeometryConstants gc = geometry_constants(g.reg, g.set, T);
  Predictor pred = build_predictor(c);
  MinimizerPathTracker tracker;
  const RunTrace tr = aomd_run(g, pred, sc.losses, tracker);

  const ComplexityMeasures m = tr.final_measures();
  res.checks.push_back(inequality("adaptive-bound", tr.final_regret(),
                                  aomd_bound(m, T, gc.gamma, gc.r_max_sq, sc.g_bound),
                                  "dynamic regret vs per-round minimizers"));
  res.checks.push_back(inequality("epoch-count", tr.num_epochs(),
                                  epoch_count_bound(T, gc.gamma, gc.r_max_sq), ""));

  double delta_sum = 0.0, d_sum = 0.0, c_sum = 0.0, v_sum = 0.0;
  for (const auto& e : tr.epochs) {
    delta_sum += static_cast<double>(e.delta);
    d_sum += e.d_epoch;
    c_sum += e.c_epoch;
    v_sum += e.v_epoch;
  }
  const double n = tr.num_epochs();
  res.checks.push_back(identity("conservation-rounds",
                                std::abs(delta_sum - static_cast<double>(T))));
  res.checks.push_back(identity("conservation-deviation", std::abs(d_sum - (m.d_t + n)),
                                "epoch sums carry one unit seed each"));
  res.checks.push_back(identity("conservation-path", std::abs(c_sum - m.c_t)));
  res.checks.push_back(identity("conservation-variability", std::abs(v_sum - m.v_t)));

  res.horizon = T;
  res.epochs = tr.num_epochs();
  res.regret = tr.final_regret();
  res.c_t = m.c_t;
  res.d_t = m.d_t;
  res.v_t = m.v_t;
  res.min_branch = aomd_min_branch(m, T) == MinBranch::Path ? "path" : "variability";
  write_trace_csv(tr, trace_out);
}

void check_game(const ExperimentConfig& c, ExperimentResult& res,
                std::ostringstream& trace_out) {
  const GameSchedule sched = build_schedule(c);
  const long T = sched.horizon();
  const double L = c.scale > 0.0 ? c.scale : default_game_scale(T, sched.cols);
  const bool honest = c.algorithm == "game-honest";

  GameTranscript tr = honest ? run_honest_game(sched, L)
                             : run_vs_adversary(sched, L, build_opponent(c, sched));

  if (honest) {
    const double need = std::max(tr.c_path_x, tr.c_path_f) + 3.0;
    if (scale_condition_holds(tr)) {
      res.checks.push_back(inequality("scale-precondition", need, 2.0 * L * L,
                                      "2L^2 must exceed max best-response path + 3"));
      res.checks.push_back(inequality("honest-bound",
                                      tr.sup_payoff_sum - tr.minimax_sum,
                                      honest_bound_rhs(tr),
                                      "total worst-case payoff minus minimax values"));
    } else {
      res.checks.push_back(skipped("scale-precondition", need, 2.0 * L * L,
                                   "precondition not met at this L; bound not applicable"));
      res.checks.push_back(skipped("honest-bound", tr.sup_payoff_sum - tr.minimax_sum,
                                   honest_bound_rhs(tr), "reported only"));
    }
  }

  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const std::vector<Vec> fixed = best_fixed_column(sched, tr);
  res.checks.push_back(inequality(
      "adversary-bound[fixed]", comparator_regret(sched, tr, fixed),
      dishonest_bound_rhs(regularity(ent, fixed), tr.f_acc_final(), L, T, tr.cols),
      "regret vs best fixed column"));
  if (sched.matrices.size() > 1) {
    const std::vector<Vec> seg = best_segment_columns(sched, tr);
    res.checks.push_back(inequality(
        "adversary-bound[segments]", comparator_regret(sched, tr, seg),
        dishonest_bound_rhs(regularity(ent, seg), tr.f_acc_final(), L, T, tr.cols),
        "regret vs best per-segment columns"));
  }

  res.horizon = T;
  res.epochs = static_cast<long>(sched.matrices.size());
  res.regret = comparator_regret(sched, tr, fixed);
  res.c_t = tr.c_path_x;
  res.d_t = tr.f_acc_final();
  res.v_t = tr.average_gap();
  write_transcript_csv(tr, trace_out);
}

}  // namespace

bool ExperimentResult::any_fail() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const BoundCheck& b) { return b.status == "FAIL"; });
}

Scenario build_scenario(const ExperimentConfig& c) {
  if (c.scenario == "alternating-experts") return make_alternating_experts(c.horizon, c.dim);
  if (c.scenario == "fixed-best-expert") return make_fixed_best_expert(c.horizon);
  if (c.scenario == "smooth-batch") {
    Rng rng(c.seed);
    std::vector<Vec> centers;
    centers.reserve(static_cast<std::size_t>(c.batches));
    for (long b = 0; b < c.batches; ++b) centers.push_back(rng.ball_point(c.dim, 1.0));
    return make_smooth_batches(static_cast<int>(c.batches), c.rounds_per_batch, centers,
                               c.curvature);
  }
  if (c.scenario == "drifting-minimizer")
    return make_drifting_minimizer(c.horizon, c.dim, c.sigma, c.seed);
  if (c.scenario == "random-linear") return make_random_linear(c.horizon, c.dim, c.seed);
  if (c.scenario == "random-quadratic") return make_random_quadratic(c.horizon, c.dim, c.seed);
  throw std::invalid_argument("unknown scenario '" + c.scenario + "'");
}

GameSchedule build_schedule(const ExperimentConfig& c) {
  if (c.scenario == "matching-pennies")
    return GameSchedule::fixed(GameSchedule::matching_pennies(), c.horizon);
  if (c.scenario == "random-switching")
    return GameSchedule::random_switching(c.rows, c.cols, c.horizon, c.switches, c.seed);
  if (c.scenario == "schedule-file") return GameSchedule::from_json_file(c.schedule_file);
  throw std::invalid_argument("unknown game scenario '" + c.scenario + "'");
}

Predictor build_predictor(const ExperimentConfig& c) {
  switch (predictor_kind_from_name(c.predictor)) {
    case PredictorKind::Zero:
      return Predictor::zero();
    case PredictorKind::LastGradient:
      return Predictor::last_gradient();
    case PredictorKind::SmoothBatchGradient:
      return Predictor::smooth_batch();
    case PredictorKind::External:
      return Predictor::external_from_csv(c.predictor_file, c.dim);
  }
  throw std::invalid_argument("unknown predictor '" + c.predictor + "'");
}

OpponentStrategy build_opponent(const ExperimentConfig& c, const GameSchedule& sched) {
  const int m = sched.rows;
  if (c.opponent == "uniform") {
    return [m](long, const Mat&, std::span<const Vec>, std::span<const Vec>) {
      return Vec(Vec::Constant(m, 1.0 / m));
    };
  }
  if (c.opponent == "seeded-random") {
    auto rng = std::make_shared<Rng>(c.seed ^ 0x9e3779b97f4a7c15ull);
    return [m, rng](long, const Mat&, std::span<const Vec>, std::span<const Vec>) {
      return rng->simplex_point(m);
    };
  }
  if (c.opponent == "best-response") {
    // Vertex best response to the previous round's play (uniform at t = 1).
    return [m](long t, const Mat& a, std::span<const Vec> x_hist, std::span<const Vec>) {
      if (t == 1) return Vec(Vec::Constant(m, 1.0 / m));
      const Vec ax = a * x_hist[t - 2];
      int best = 0;
      for (int i = 1; i < m; ++i)
        if (ax[i] > ax[best]) best = i;
      Vec f = Vec::Zero(m);
      f[best] = 1.0;
      return f;
    };
  }
  throw std::invalid_argument("unknown opponent '" + c.opponent + "'");
}

std::string resolve_output_dir(const ExperimentConfig& c, const std::string& cli_override) {
  if (!cli_override.empty()) return cli_override;
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("DYNREG_OUTPUT_DIR"); env != nullptr && *env != '\0')
    return env;
  return ".";
}

ExperimentResult run_experiment(const ExperimentConfig& c, std::ostream& log, int verbosity) {
  validate_config(c);
  ExperimentResult res;
  res.config = c;

  // Everything is computed before any file is opened, so invalid inputs
  // leave no artifacts behind.
  std::ostringstream trace_out;
  if (c.algorithm == "omd-static" || c.algorithm == "aomd") {
    const Scenario sc = build_scenario(c);
    if (c.algorithm == "omd-static")
      check_omd_static(c, sc, res, trace_out);
    else
      check_aomd(c, sc, res, trace_out);
  } else {
    check_game(c, res, trace_out);
  }

  const std::string outdir = c.output_dir.empty() ? "." : c.output_dir;
  std::filesystem::create_directories(outdir);
  res.trace_path = outdir + "/" + c.name + "_trace.csv";
  res.report_path = outdir + "/" + c.name + "_bounds.csv";
  {
    std::ofstream f(res.trace_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + res.trace_path);
    f << trace_out.str();
  }
  {
    std::ofstream f(res.report_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + res.report_path);
    f << "check,lhs,rhs,status,note\n";
    for (const auto& b : res.checks)
      f << b.name << ',' << fmt(b.lhs, "%.17g") << ',' << fmt(b.rhs, "%.17g") << ','
        << b.status << ',' << b.note << "\n";
  }

  if (verbosity >= 1) {
    for (const auto& b : res.checks)
      log << "[" << c.name << "] " << b.status << " " << b.name
          << "  lhs=" << fmt(b.lhs) << " rhs=" << fmt(b.rhs)
          << (b.note.empty() ? "" : "  (" + b.note + ")") << "\n";
    log << "[" << c.name << "] trace: " << res.trace_path
        << "  report: " << res.report_path << "\n";
  }
  return res;
}

std::vector<ExperimentResult> compare_scenarios(const std::vector<ExperimentConfig>& configs,
                                                std::ostream& log, int verbosity) {
  std::vector<ExperimentResult> out;
  out.reserve(configs.size());
  for (const auto& c : configs) {
    try {
      out.push_back(run_experiment(c, log, verbosity));
    } catch (const std::exception& e) {
      ExperimentResult r;
      r.config = c;
      r.ok = false;
      r.error = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_summary_table(const std::vector<ExperimentResult>& rows, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-18s %-20s %8s %7s %12s %12s %12s %12s %-12s %s",
                "name", "algorithm", "scenario", "T", "epochs", "regret", "C_T", "D_T",
                "V_T", "min-branch", "status");
  out << line << "\n";
  for (const auto& r : rows) {
    if (!r.ok) {
      std::snprintf(line, sizeof line, "%-16s %-18s %-20s %8s %7s %12s %12s %12s %12s %-12s ",
                    r.config.name.c_str(), r.config.algorithm.c_str(),
                    r.config.scenario.c_str(), "-", "-", "-", "-", "-", "-", "-");
      out << line << "error: " << r.error << "\n";
      continue;
    }
    std::snprintf(line, sizeof line,
                  "%-16s %-18s %-20s %8ld %7ld %12.6g %12.6g %12.6g %12.6g %-12s %s",
                  r.config.name.c_str(), r.config.algorithm.c_str(),
                  r.config.scenario.c_str(), r.horizon, r.epochs, r.regret, r.c_t, r.d_t,
                  r.v_t, r.min_branch.c_str(), r.any_fail() ? "FAIL" : "ok");
    out << line << "\n";
  }
}

int exit_status(const std::vector<ExperimentResult>& results) {
  int status = 0;
  for (const auto& r : results) {
    if (!r.ok) return 2;
    if (r.any_fail()) status = 1;
  }
  return status;
}

}  // namespace dynreg

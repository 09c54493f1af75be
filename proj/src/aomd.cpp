#include "dynreg/aomd.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dynreg {

// ── doubling condition ─────────────────────────────────────────────────────

bool doubling_check(const EpochState& e, double gamma, double r_max_sq) {
  if (!(e.d_epoch >= 1.0))
    throw std::invalid_argument("doubling_check: deviation accumulator below its seed");
  double min_term = 0.0;
  if (e.c_epoch > 0.0 && e.v_epoch > 0.0) {
    const double v = e.v_epoch;
    const double delta = static_cast<double>(e.delta);
    const double var_branch = std::cbrt(v * v * delta * delta / e.d_epoch);
    min_term = std::min(e.c_epoch, var_branch);
  }
  return e.l_n * e.l_n < gamma * min_term + 4.0 * r_max_sq;
}

// ── trackers ───────────────────────────────────────────────────────────────

void MinimizerPathTracker::start_epoch(long) { epoch_value_ = 0.0; }

double MinimizerPathTracker::observe(long t, const LossOracle& loss, const Geometry& geom) {
  Vec m = loss.minimizer(geom.set);
  if (t > 1 && prev_minimizer_.size() == m.size())
    epoch_value_ += primal_norm(geom.reg, m - prev_minimizer_);
  prev_minimizer_ = std::move(m);
  return epoch_value_;
}

StrategyClassTracker::StrategyClassTracker(Functional f) : functional_(std::move(f)) {
  if (!functional_) throw std::invalid_argument("StrategyClassTracker: empty functional");
}

void StrategyClassTracker::start_epoch(long) {
  epoch_losses_.clear();
  last_value_ = 0.0;
}

double StrategyClassTracker::observe(long, const LossOracle& loss, const Geometry& geom) {
  epoch_losses_.push_back(loss);
  const double v = functional_(std::span<const LossOracle>(epoch_losses_), geom);
  if (v + 1e-12 < last_value_)
    throw std::logic_error("StrategyClassTracker: functional decreased within an epoch");
  last_value_ = v;
  return v;
}

// ── traces ─────────────────────────────────────────────────────────────────

ComplexityMeasures RunTrace::final_measures() const {
  ComplexityMeasures m;
  if (!rows.empty()) {
    m.c_t = rows.back().c_cum;
    m.d_t = rows.back().d_cum;
    m.v_t = rows.back().v_cum;
  }
  return m;
}

namespace {

void append_real(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

}  // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "t,epoch,L_N,eta_t,loss,cum_dyn_regret,D_cum,C_cum,V_cum\n";
  for (const auto& r : trace.rows) {
    std::string line = std::to_string(r.t) + "," + std::to_string(r.epoch) + ",";
    append_real(line, r.l_n);
    line += ',';
    append_real(line, r.eta);
    line += ',';
    append_real(line, r.loss);
    line += ',';
    append_real(line, r.cum_dyn_regret);
    line += ',';
    append_real(line, r.d_cum);
    line += ',';
    append_real(line, r.c_cum);
    line += ',';
    append_real(line, r.v_cum);
    line += '\n';
    out << line;
  }
}

// ── drivers ────────────────────────────────────────────────────────────────

namespace {

Vec default_start(const Geometry& geom) {
  if (geom.set.kind == SetKind::Simplex)
    return Vec::Constant(geom.set.dim, 1.0 / geom.set.dim);
  return geom.set.center;
}

RunTrace run_loop(const Geometry& geom, Predictor& predictor,
                  std::span<const LossOracle> losses, RegularityTracker& tracker,
                  double fixed_scale, bool adaptive, const RunOptions& opts) {
  const long T = static_cast<long>(losses.size());
  if (T < 1) throw std::invalid_argument("run: need at least one round");
  for (const auto& f : losses)
    if (f.c.size() != geom.set.dim)
      throw std::invalid_argument("run: loss dimension does not match the geometry");

  RunTrace trace;
  trace.horizon = T;
  trace.constants = geometry_constants(geom.reg, geom.set, T);
  const double r_max = std::sqrt(trace.constants.r_max_sq);
  double g = 0.0;
  for (const auto& f : losses) g = std::max(g, f.value_bound(geom.set));
  trace.constants.g_bound = g;

  const double scale0 = adaptive ? 3.0 * r_max : fixed_scale;
  const Vec x0 = opts.x0.size() ? opts.x0 : default_start(geom);
  OmdState state = omd_init(geom, x0, scale0);

  EpochState epoch;
  epoch.n = 1;
  epoch.l_n = scale0;
  epoch.k_n = 1;
  tracker.start_epoch(1);

  trace.rows.reserve(T);
  trace.actions.reserve(T);
  trace.grads.reserve(T);
  trace.predictions.reserve(T);
  trace.minimizers.reserve(T);

  Vec last_grad;
  const LossOracle* last_loss = nullptr;
  Vec prev_minimizer;
  double cum_regret = 0.0, d_cum = 0.0, c_cum = 0.0, v_cum = 0.0;

  for (long t = 1; t <= T; ++t) {
    if (adaptive && doubling_check(epoch, trace.constants.gamma, trace.constants.r_max_sq)) {
      trace.epochs.push_back(epoch);
      const int n = epoch.n + 1;
      const double l_n = 3.0 * r_max * std::ldexp(1.0, n - 1);
      epoch = EpochState{};
      epoch.n = n;
      epoch.l_n = l_n;
      epoch.k_n = t;
      state.scale = l_n;
      state.dev_sum = 1.0;
      state.dev_sum_prev = 0.0;
      state.eta = step_size(l_n, state.dev_sum, state.dev_sum_prev);
      tracker.start_epoch(t);
    }

    const LossOracle& loss = losses[t - 1];
    PredictorContext ctx;
    ctx.round = t;
    ctx.dim = geom.set.dim;
    ctx.last_gradient = last_grad.size() ? &last_grad : nullptr;
    ctx.last_loss = last_loss;
    ctx.x_hat_prev = &state.x_hat;
    const Vec m_pred = predictor.predict(ctx);

    const OmdRound res = omd_round(geom, state, m_pred, loss);

    epoch.d_epoch += res.deviation_sq;
    epoch.c_epoch = tracker.observe(t, loss, geom);
    const double v_inc = last_loss ? sup_variation(*last_loss, loss, geom.set) : 0.0;
    epoch.v_epoch += v_inc;
    epoch.delta += 1;

    Vec x_star = loss.minimizer(geom.set);
    const double c_inc =
        prev_minimizer.size() ? primal_norm(geom.reg, x_star - prev_minimizer) : 0.0;
    d_cum += res.deviation_sq;
    c_cum += c_inc;
    v_cum += v_inc;
    cum_regret += loss.value(res.played) - loss.value(x_star);

    TraceRow row;
    row.t = t;
    row.epoch = epoch.n;
    row.l_n = epoch.l_n;
    row.eta = res.eta_used;
    row.loss = loss.value(res.played);
    row.cum_dyn_regret = cum_regret;
    row.d_cum = d_cum;
    row.c_cum = c_cum;
    row.v_cum = v_cum;
    trace.rows.push_back(row);
    trace.actions.push_back(res.played);
    trace.grads.push_back(res.grad);
    trace.predictions.push_back(m_pred);
    trace.minimizers.push_back(std::move(x_star));

    last_grad = res.grad;
    last_loss = &loss;
    prev_minimizer = trace.minimizers.back();
  }
  trace.epochs.push_back(epoch);
  return trace;
}

}  // namespace

RunTrace omd_run(const Geometry& geom, Predictor& predictor,
                 std::span<const LossOracle> losses, double L, const RunOptions& opts) {
  if (!(L > 0.0)) throw std::invalid_argument("omd_run: L must be > 0");
  MinimizerPathTracker tracker;
  return run_loop(geom, predictor, losses, tracker, L, false, opts);
}

RunTrace aomd_run(const Geometry& geom, Predictor& predictor,
                  std::span<const LossOracle> losses, RegularityTracker& tracker,
                  const RunOptions& opts) {
  return run_loop(geom, predictor, losses, tracker, 0.0, true, opts);
}

}  // namespace dynreg

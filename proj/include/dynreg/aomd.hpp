#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dynreg/metrics.hpp"
#include "dynreg/omd.hpp"
#include "dynreg/predictor.hpp"

namespace dynreg {

// ── epochs ─────────────────────────────────────────────────────────────────

// Per-epoch restart bookkeeping.  d_epoch carries the unit seed (starts at 1),
// matching the learner's step-size accumulator; c_epoch / v_epoch start at 0.
struct EpochState {
  int n = 1;           // epoch index
  double l_n = 0.0;    // scale for this epoch: 3 R_max 2^(n-1)
  double c_epoch = 0.0;
  double v_epoch = 0.0;
  double d_epoch = 1.0;
  long delta = 0;      // rounds completed in this epoch
  long k_n = 1;        // first round of this epoch
};

// True when the current scale has been outgrown:
//   L_n^2 < gamma min{C, V^(2/3) delta^(2/3) D^(-1/3)} + 4 R_max^2,
// with the min read as 0 whenever C or V is 0 (a fresh epoch never doubles).
bool doubling_check(const EpochState& e, double gamma, double r_max_sq);

// ── regularity trackers ────────────────────────────────────────────────────

// Supplies the per-epoch regularity C_(N).  MinimizerPath accumulates the
// primal-norm path length of the per-round loss minimizers (increments
// straddle epoch boundaries; the round-1 increment is 0).  StrategyClass
// re-evaluates a user functional on the epoch's loss slice each round, for
// comparing against restricted comparator classes rather than the minimizer
// path; it must be non-decreasing within an epoch.
class RegularityTracker {
 public:
  virtual ~RegularityTracker() = default;
  virtual void start_epoch(long t) = 0;
  // Observe round t; returns the updated epoch regularity value.
  virtual double observe(long t, const LossOracle& loss, const Geometry& geom) = 0;
};

class MinimizerPathTracker final : public RegularityTracker {
 public:
  void start_epoch(long t) override;
  double observe(long t, const LossOracle& loss, const Geometry& geom) override;

 private:
  Vec prev_minimizer_;
  double epoch_value_ = 0.0;
};

class StrategyClassTracker final : public RegularityTracker {
 public:
  // The functional sees the epoch's loss slice observed so far.
  using Functional =
      std::function<double(std::span<const LossOracle>, const Geometry&)>;
  explicit StrategyClassTracker(Functional f);

  void start_epoch(long t) override;
  double observe(long t, const LossOracle& loss, const Geometry& geom) override;

 private:
  Functional functional_;
  std::vector<LossOracle> epoch_losses_;
  double last_value_ = 0.0;
};

// ── run traces ─────────────────────────────────────────────────────────────

struct TraceRow {
  long t = 0;
  int epoch = 1;
  double l_n = 0.0;
  double eta = 0.0;          // step size the round was played with
  double loss = 0.0;         // f_t(x_t)
  double cum_dyn_regret = 0.0;  // vs per-round minimizers
  double d_cum = 0.0;        // global deviation (no seed)
  double c_cum = 0.0;        // global minimizer path length
  double v_cum = 0.0;        // global variability
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<Vec> actions;
  std::vector<Vec> grads;
  std::vector<Vec> predictions;
  std::vector<Vec> minimizers;
  std::vector<EpochState> epochs;  // snapshot of every epoch at its last round
  GeometryConstants constants;
  long horizon = 0;

  int num_epochs() const { return static_cast<int>(epochs.size()); }
  ComplexityMeasures final_measures() const;
  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_dyn_regret; }
};

// Header "t,epoch,L_N,eta_t,loss,cum_dyn_regret,D_cum,C_cum,V_cum", one row
// per round, 17 significant digits.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

// ── drivers ────────────────────────────────────────────────────────────────

struct RunOptions {
  Vec x0;  // empty: uniform point (simplex) / center (ball)
};

// Optimistic mirror descent at a fixed scale L (no restarts).
RunTrace omd_run(const Geometry& geom, Predictor& predictor,
                 std::span<const LossOracle> losses, double L,
                 const RunOptions& opts = {});

// Adaptive restarts: the scale starts at 3 R_max and doubles whenever
// doubling_check fires at the top of a round, resetting the deviation
// accumulator and the epoch trackers while keeping the iterate warm.
RunTrace aomd_run(const Geometry& geom, Predictor& predictor,
                  std::span<const LossOracle> losses, RegularityTracker& tracker,
                  const RunOptions& opts = {});

}  // namespace dynreg

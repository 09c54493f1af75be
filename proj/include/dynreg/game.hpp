#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dynreg/rng.hpp"

namespace dynreg {

using Mat = Eigen::MatrixXd;

// ── schedules ──────────────────────────────────────────────────────────────

// A sequence of zero-sum payoff matrices A_t in [-1,1]^{m x n}, stored as
// distinct segments with durations.  Player I mixes over the n columns and
// pays f^T A x to Player II, who mixes over the m rows.
struct GameSchedule {
  std::vector<Mat> matrices;    // one per segment
  std::vector<long> durations;  // rounds per segment, each >= 1
  int rows = 0, cols = 0;

  long horizon() const;
  int switch_count() const { return static_cast<int>(matrices.size()) - 1; }
  int index_at(long t) const;          // 1-based round -> segment index
  const Mat& at(long t) const { return matrices[index_at(t)]; }
  std::vector<long> segment_starts() const;

  static GameSchedule fixed(Mat a, long T);
  static GameSchedule from_segments(std::vector<std::pair<Mat, long>> segments);
  // `switches` + 1 seeded matrices with entries uniform in [-1,1], horizon
  // split into near-equal segments.
  static GameSchedule random_switching(int rows, int cols, long T, int switches,
                                       std::uint64_t seed);
  // {"segments": [{"matrix": [[...], ...], "rounds": k}, ...]}
  static GameSchedule from_json_file(const std::string& path);
  static Mat matching_pennies();
};

// ── players ────────────────────────────────────────────────────────────────

// min{ log(T^2 dim) L / (sqrt(acc_prev) + sqrt(acc_prev_prev)), 1/(32L) }.
// Both accumulators zero (round 1) gives the cap 1/(32L).
double game_step_size(double L, long T, int dim, double acc_prev_prev, double acc_prev);

// Scale suggested by the theory when nothing is known: 1/sqrt(log(T^2 n)).
double default_game_scale(long T, int dim);

// Exponential-weights player with uniform mixing.  The same machinery serves
// both sides: each player feeds its own loss vector (what it descends on),
// i.e. f^T A for Player I and -A x for Player II.
struct PlayerState {
  Vec x_hat;        // pre-mixing iterate
  Vec x_hat_mixed;  // after mixing beta of uniform
  Vec x_play;       // action for the upcoming round
  double eta = 0.0; // step size for the upcoming round
  double dev_acc = 0.0;       // accumulator of squared loss-vector increments
  double dev_acc_prev = 0.0;  // same, one round behind
  double scale = 0.0;         // L
  double beta = 0.0;          // mixing weight 1/T^2
  Vec last_obs;               // previous observed loss vector (zero before round 1)
  long horizon = 0;
  long round = 1;
};

PlayerState make_player(int dim, long T, double L, const Vec& start = Vec());

// One round: exponential step against `observed` with the pending step size,
// mix uniform, update the accumulator with |observed - previous observed|^2_inf,
// recompute the step size, then the optimistic step against m_next.  Returns
// the next play (also stored in the state).
Vec player_update(PlayerState& state, const Vec& observed, const Vec& m_next);

// ── minimax baseline ───────────────────────────────────────────────────────

struct MinimaxError : std::runtime_error {
  explicit MinimaxError(double gap_)
      : std::runtime_error("minimax solver did not certify the duality gap; last gap = " +
                           std::to_string(gap_)),
        gap(gap_) {}
  double gap;
};

struct MinimaxResult {
  double value = 0.0;
  double gap = 0.0;  // certified duality gap at termination
  long iterations = 0;
};

// Value min over x in the column simplex of max_i (A x)_i, by exponential-
// weights self-play with averaging; termination requires a certified duality
// gap max_i (A xbar)_i - min_j (ybar^T A)_j <= tol.  Candidate supports read
// off the averages are polished by small linear solves, which usually makes
// the certificate exact.  Throws MinimaxError if the cap is reached.
MinimaxResult minimax_value_certified(const Mat& a, double tol = 1e-6,
                                      long max_iter = 400000);
double minimax_value(const Mat& a, double tol = 1e-6);

// ── transcripts ────────────────────────────────────────────────────────────

struct GameRound {
  long t = 0;
  int matrix_index = 0;
  Vec x, f;             // both players' mixed actions
  double payoff = 0.0;  // f^T A x
  double eta1 = 0.0, eta2 = 0.0;
  double f_acc = 0.0, a_acc = 0.0;  // running squared-increment accumulators
  double minimax = 0.0;             // value of A_t
  double sup_payoff = 0.0;          // max_i (A x)_i
};

struct GameTranscript {
  std::vector<GameRound> rounds;
  int rows = 0, cols = 0;
  double scale = 0.0, beta = 0.0;
  // Vertex best-response path lengths (l1, lowest-index ties).
  double c_path_x = 0.0, c_path_f = 0.0;
  double drift_sum = 0.0;     // sum_t |A_t - A_{t-1}|_inf (max-abs-entry norm)
  double drift_sq_sum = 0.0;  // same, squared increments
  double minimax_sum = 0.0, sup_payoff_sum = 0.0;

  long horizon() const { return static_cast<long>(rounds.size()); }
  double f_acc_final() const { return rounds.empty() ? 0.0 : rounds.back().f_acc; }
  double a_acc_final() const { return rounds.empty() ? 0.0 : rounds.back().a_acc; }
  // Average gap between Player I's worst-case payoff and the minimax baseline.
  double average_gap() const;
};

struct GameOptions {
  Vec p1_start, p2_start;     // empty: uniform
  double minimax_tol = 1e-6;
};

// Player II's move for round t given the public history through t-1.
using OpponentStrategy = std::function<Vec(
    long t, const Mat& a_t, std::span<const Vec> x_hist, std::span<const Vec> f_hist)>;

// Player I follows the prescribed strategy against an arbitrary opponent.
// Throws if the opponent emits an invalid distribution.
GameTranscript run_vs_adversary(const GameSchedule& sched, double L,
                                const OpponentStrategy& opponent,
                                const GameOptions& opts = {});

// Both players follow the prescribed strategies.
GameTranscript run_honest_game(const GameSchedule& sched, double L,
                               const GameOptions& opts = {});

// Closure reproducing the prescribed Player II, for run_vs_adversary.
OpponentStrategy honest_opponent(const GameSchedule& sched, double L,
                                 const Vec& start = Vec());

// ── bound evaluation ───────────────────────────────────────────────────────

// Scale condition under which the honest-case bound applies:
// 2 L^2 > max{C_T, C'_T} + 3, checked post-hoc on the transcript.
bool scale_condition_holds(const GameTranscript& tr);

// Honest-case right-hand side (five terms) bounding
// sum_t sup_f f^T A_t x_t - sum_t minimax(A_t).
double honest_bound_rhs(const GameTranscript& tr);

// Regret right-hand side valid against any opponent:
// 2 log(T^2 n)(C(u)+2)(32 L + 2 sqrt(F_T)/(log(T^2 n) L)) + log(T^2 n)(L/2) sqrt(F_T).
double dishonest_bound_rhs(double c_of_u, double f_acc, double L, long T, int cols);

// sum_t f_t^T A_t (x_t - u_t).
double comparator_regret(const GameSchedule& sched, const GameTranscript& tr,
                         std::span<const Vec> comparators);

// Hindsight comparators for the dishonest bound: the best fixed column
// vertex, and the best per-segment column vertices (switching only where the
// schedule switches).
std::vector<Vec> best_fixed_column(const GameSchedule& sched, const GameTranscript& tr);
std::vector<Vec> best_segment_columns(const GameSchedule& sched, const GameTranscript& tr);

// Header then one row per round, 17 significant digits:
// t,matrix,payoff,eta1,eta2,F_acc,A_acc,minimax,sup_payoff,x_*,f_*.
void write_transcript_csv(const GameTranscript& tr, std::ostream& out);

}  // namespace dynreg

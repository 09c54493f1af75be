#include "dynreg/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "dynreg/geometry.hpp"

namespace dynreg {

// ── schedules ──────────────────────────────────────────────────────────────

long GameSchedule::horizon() const {
  long total = 0;
  for (long d : durations) total += d;
  return total;
}

int GameSchedule::index_at(long t) const {
  if (t < 1) throw std::out_of_range("GameSchedule: rounds are 1-based, got " + std::to_string(t));
  long acc = 0;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    acc += durations[i];
    if (t <= acc) return static_cast<int>(i);
  }
  throw std::out_of_range("GameSchedule: round " + std::to_string(t) +
                          " beyond horizon " + std::to_string(acc));
}

std::vector<long> GameSchedule::segment_starts() const {
  std::vector<long> starts;
  long acc = 1;
  for (long d : durations) {
    starts.push_back(acc);
    acc += d;
  }
  return starts;
}

GameSchedule GameSchedule::fixed(Mat a, long T) {
  return from_segments({{std::move(a), T}});
}

GameSchedule GameSchedule::from_segments(std::vector<std::pair<Mat, long>> segments) {
  if (segments.empty()) throw std::invalid_argument("schedule: no segments");
  GameSchedule s;
  s.rows = static_cast<int>(segments.front().first.rows());
  s.cols = static_cast<int>(segments.front().first.cols());
  if (s.rows < 1 || s.cols < 1) throw std::invalid_argument("schedule: empty matrix");
  for (auto& [a, d] : segments) {
    if (a.rows() != s.rows || a.cols() != s.cols)
      throw std::invalid_argument("schedule: inconsistent matrix shapes");
    if (d < 1) throw std::invalid_argument("schedule: segment duration must be >= 1");
    if (a.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
      throw std::invalid_argument("schedule: matrix entries must lie in [-1, 1]");
    s.matrices.push_back(std::move(a));
    s.durations.push_back(d);
  }
  return s;
}

GameSchedule GameSchedule::random_switching(int rows, int cols, long T, int switches,
                                            std::uint64_t seed) {
  if (switches < 0) throw std::invalid_argument("schedule: switches must be >= 0");
  const int segs = switches + 1;
  if (T < segs) throw std::invalid_argument("schedule: horizon shorter than segment count");
  Rng rng(seed);
  std::vector<std::pair<Mat, long>> segments;
  const long base = T / segs, extra = T % segs;
  for (int i = 0; i < segs; ++i) {
    Mat a(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
    segments.emplace_back(std::move(a), base + (i < extra ? 1 : 0));
  }
  return from_segments(std::move(segments));
}

GameSchedule GameSchedule::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("schedule " + path + ": " + e.what());
  }
  if (!j.contains("segments") || !j["segments"].is_array())
    throw std::runtime_error("schedule " + path + ": missing 'segments' array");
  std::vector<std::pair<Mat, long>> segments;
  for (const auto& seg : j["segments"]) {
    const auto& rows = seg.at("matrix");
    const int m = static_cast<int>(rows.size());
    if (m == 0) throw std::runtime_error("schedule " + path + ": empty matrix");
    const int n = static_cast<int>(rows[0].size());
    Mat a(m, n);
    for (int r = 0; r < m; ++r) {
      if (static_cast<int>(rows[r].size()) != n)
        throw std::runtime_error("schedule " + path + ": ragged matrix");
      for (int c = 0; c < n; ++c) a(r, c) = rows[r][c].get<double>();
    }
    segments.emplace_back(std::move(a), seg.at("rounds").get<long>());
  }
  return from_segments(std::move(segments));
}

Mat GameSchedule::matching_pennies() {
  Mat a(2, 2);
  a << 1.0, -1.0, -1.0, 1.0;
  return a;
}

// ── players ────────────────────────────────────────────────────────────────

double game_step_size(double L, long T, int dim, double acc_prev_prev, double acc_prev) {
  if (!(L > 0.0)) throw std::invalid_argument("game_step_size: L must be > 0");
  if (T < 1 || dim < 1) throw std::invalid_argument("game_step_size: bad horizon/dimension");
  if (!(acc_prev_prev >= 0.0) || !(acc_prev >= 0.0))
    throw std::invalid_argument("game_step_size: accumulators must be >= 0");
  const double cap = 1.0 / (32.0 * L);
  const double denom = std::sqrt(acc_prev) + std::sqrt(acc_prev_prev);
  if (denom == 0.0) return cap;
  const double lg = std::log(static_cast<double>(T) * static_cast<double>(T) * dim);
  return std::min(lg * L / denom, cap);
}

double default_game_scale(long T, int dim) {
  return 1.0 / std::sqrt(std::log(static_cast<double>(T) * static_cast<double>(T) * dim));
}

PlayerState make_player(int dim, long T, double L, const Vec& start) {
  if (dim < 1) throw std::invalid_argument("make_player: dimension must be >= 1");
  if (T < 1) throw std::invalid_argument("make_player: horizon must be >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("make_player: L must be > 0");
  PlayerState s;
  const Vec x0 = start.size() ? start : Vec(Vec::Constant(dim, 1.0 / dim));
  if (!FeasibleSet::simplex(dim).contains(x0, 1e-9))
    throw std::invalid_argument("make_player: start is not a distribution");
  s.x_hat = x0;
  s.x_hat_mixed = x0;
  s.x_play = x0;
  s.scale = L;
  s.beta = 1.0 / (static_cast<double>(T) * static_cast<double>(T));
  s.horizon = T;
  s.eta = game_step_size(L, T, dim, 0.0, 0.0);
  s.last_obs = Vec::Zero(dim);
  return s;
}

Vec player_update(PlayerState& s, const Vec& observed, const Vec& m_next) {
  const int dim = static_cast<int>(s.x_hat.size());
  if (observed.size() != dim || m_next.size() != dim)
    throw std::invalid_argument("player_update: vector dimension mismatch");
  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const FeasibleSet simp = FeasibleSet::simplex(dim);
  s.x_hat = mirror_step(ent, simp, s.eta, observed, s.x_hat_mixed);
  s.x_hat_mixed = (1.0 - s.beta) * s.x_hat + Vec::Constant(dim, s.beta / dim);
  const double inc = (observed - s.last_obs).lpNorm<Eigen::Infinity>();
  s.dev_acc_prev = s.dev_acc;
  s.dev_acc += inc * inc;
  s.eta = game_step_size(s.scale, s.horizon, dim, s.dev_acc_prev, s.dev_acc);
  s.x_play = mirror_step(ent, simp, s.eta, m_next, s.x_hat_mixed);
  s.last_obs = observed;
  s.round += 1;
  return s.x_play;
}

// ── minimax baseline ───────────────────────────────────────────────────────

namespace {

struct Candidate {
  Vec x, y;
  double upper = 0.0, lower = 0.0;

  double gap() const { return upper - lower; }
  double value() const { return 0.5 * (upper + lower); }
};

Candidate evaluate_pair(const Mat& a, Vec x, Vec y) {
  Candidate c;
  c.upper = (a * x).maxCoeff();
  c.lower = (y.transpose() * a).minCoeff();
  c.x = std::move(x);
  c.y = std::move(y);
  return c;
}

// Solve for the equilibrium assuming the given equal-size supports: x on the
// support columns makes the supported rows indifferent, and symmetrically.
bool solve_support(const Mat& a, const std::vector<int>& sy, const std::vector<int>& sx,
                   Candidate& out) {
  const int k = static_cast<int>(sx.size());
  Eigen::MatrixXd sys(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) sys(r, c) = a(sy[r], sx[c]);
    sys(r, k) = -1.0;
  }
  for (int c = 0; c < k; ++c) sys(k, c) = 1.0;
  sys(k, k) = 0.0;
  rhs[k] = 1.0;
  const Eigen::VectorXd solx = sys.colPivHouseholderQr().solve(rhs);
  if (!solx.allFinite() || (sys * solx - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return false;

  Eigen::MatrixXd syst = sys;
  syst.topLeftCorner(k, k) = sys.topLeftCorner(k, k).transpose();
  const Eigen::VectorXd soly = syst.colPivHouseholderQr().solve(rhs);
  if (!soly.allFinite() || (syst * soly - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return false;

  Vec x = Vec::Zero(a.cols()), y = Vec::Zero(a.rows());
  for (int c = 0; c < k; ++c) {
    if (solx[c] < -1e-9 || soly[c] < -1e-9) return false;
    x[sx[c]] = std::max(0.0, solx[c]);
    y[sy[c]] = std::max(0.0, soly[c]);
  }
  const double xs = x.sum(), ys = y.sum();
  if (xs <= 0.0 || ys <= 0.0) return false;
  out = evaluate_pair(a, x / xs, y / ys);
  return true;
}

void push_masks(int dim, std::vector<std::vector<int>>& by_size) {
  by_size.assign(dim + 1, {});
  for (int mask = 1; mask < (1 << dim); ++mask)
    by_size[__builtin_popcount(static_cast<unsigned>(mask))].push_back(mask);
}

std::vector<int> mask_to_indices(int mask) {
  std::vector<int> idx;
  for (int i = 0; mask >> i; ++i)
    if (mask & (1 << i)) idx.push_back(i);
  return idx;
}

}  // namespace

MinimaxResult minimax_value_certified(const Mat& a, double tol, long max_iter) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  if (m < 1 || n < 1) throw std::invalid_argument("minimax_value: empty matrix");
  if (a.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
    throw std::invalid_argument("minimax_value: entries must lie in [-1, 1]");

  // Pure saddle point: exact, no iteration.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) >= a.col(j).maxCoeff() && a(i, j) <= a.row(i).minCoeff()) {
        MinimaxResult r;
        r.value = a(i, j);
        r.gap = 0.0;
        return r;
      }

  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const FeasibleSet sx = FeasibleSet::simplex(n), sy = FeasibleSet::simplex(m);
  const double eta = 0.25;
  Vec bx = Vec::Constant(n, 1.0 / n), by = Vec::Constant(m, 1.0 / m);
  Vec x = bx, y = by;
  Vec xbar = Vec::Zero(n), ybar = Vec::Zero(m);
  Candidate best;
  best.upper = 2.0;
  best.lower = -2.0;

  const bool small = m <= 4 && n <= 4;
  std::vector<std::vector<int>> row_masks, col_masks;
  if (small) {
    push_masks(m, row_masks);
    push_masks(n, col_masks);
  }

  for (long k = 1; k <= max_iter; ++k) {
    const Vec lx = a.transpose() * y;
    const Vec ly = -(a * x);
    xbar += x;
    ybar += y;
    bx = mirror_step(ent, sx, eta, lx, bx);
    by = mirror_step(ent, sy, eta, ly, by);
    x = mirror_step(ent, sx, eta, lx, bx);
    y = mirror_step(ent, sy, eta, ly, by);

    if (k % 64 != 0 && k != 8) continue;

    const Vec xc = xbar / static_cast<double>(k), yc = ybar / static_cast<double>(k);
    Candidate avg = evaluate_pair(a, xc, yc);
    if (avg.gap() < best.gap()) best = avg;

    // Polish: supports read off the averages, then (for small matrices)
    // every equal-size support pair.
    std::vector<int> px, py;
    for (int j = 0; j < n; ++j)
      if (xc[j] > 1e-4) px.push_back(j);
    for (int i = 0; i < m; ++i)
      if (yc[i] > 1e-4) py.push_back(i);
    Candidate cand;
    if (px.size() == py.size() && solve_support(a, py, px, cand) && cand.gap() < best.gap())
      best = cand;
    if (small) {
      for (std::size_t size = 1; size <= std::min(row_masks.size(), col_masks.size()) - 1;
           ++size)
        for (int rm : row_masks[size])
          for (int cm : col_masks[size])
            if (solve_support(a, mask_to_indices(rm), mask_to_indices(cm), cand) &&
                cand.gap() < best.gap())
              best = cand;
    }
    if (best.gap() <= tol) {
      MinimaxResult r;
      r.value = best.value();
      r.gap = best.gap();
      r.iterations = k;
      return r;
    }
  }
  throw MinimaxError(best.gap());
}

double minimax_value(const Mat& a, double tol) {
  return minimax_value_certified(a, tol).value;
}

// ── transcripts ────────────────────────────────────────────────────────────

double GameTranscript::average_gap() const {
  if (rounds.empty()) return 0.0;
  return (sup_payoff_sum - minimax_sum) / static_cast<double>(horizon());
}

namespace {

// l-infinity vector norm of the matrix difference read entrywise (the bound's
// schedule-drift norm): max absolute entry.
double matrix_drift(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

int argmin_index(const Vec& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v[i] < v[best]) best = i;
  return best;
}

int argmax_index(const Vec& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

void finalize_transcript(GameTranscript& tr, const GameSchedule& sched, double tol) {
  std::vector<double> seg_value(sched.matrices.size());
  for (std::size_t i = 0; i < sched.matrices.size(); ++i)
    seg_value[i] = minimax_value(sched.matrices[i], tol);

  Vec prev_ax;
  double a_acc = 0.0, a_acc_prev = 0.0;
  int prev_xstar = -1, prev_fstar = -1;
  for (auto& r : tr.rounds) {
    const Mat& a = sched.matrices[r.matrix_index];
    const Vec ax = a * r.x;
    r.minimax = seg_value[r.matrix_index];
    r.sup_payoff = ax.maxCoeff();
    tr.minimax_sum += r.minimax;
    tr.sup_payoff_sum += r.sup_payoff;

    // Player II's step-size trace: recomputed from the public accumulator,
    // identical to the honest player's internal value.
    r.eta2 = game_step_size(tr.scale, tr.horizon(), tr.rows, a_acc_prev, a_acc);
    const double inc =
        prev_ax.size() ? (ax - prev_ax).lpNorm<Eigen::Infinity>() : ax.lpNorm<Eigen::Infinity>();
    a_acc_prev = a_acc;
    a_acc += inc * inc;
    r.a_acc = a_acc;
    prev_ax = ax;

    const int xstar = argmin_index(a.transpose() * r.f);
    const int fstar = argmax_index(ax);
    if (prev_xstar >= 0 && xstar != prev_xstar) tr.c_path_x += 2.0;
    if (prev_fstar >= 0 && fstar != prev_fstar) tr.c_path_f += 2.0;
    prev_xstar = xstar;
    prev_fstar = fstar;

    if (r.t >= 2) {
      const int cur = r.matrix_index, prev = sched.index_at(r.t - 1);
      if (cur != prev) {
        const double d = matrix_drift(sched.matrices[cur], sched.matrices[prev]);
        tr.drift_sum += d;
        tr.drift_sq_sum += d * d;
      }
    }
  }
}

}  // namespace

GameTranscript run_vs_adversary(const GameSchedule& sched, double L,
                                const OpponentStrategy& opponent, const GameOptions& opts) {
  const long T = sched.horizon();
  if (T < 1) throw std::invalid_argument("run_vs_adversary: empty schedule");
  if (!(L > 0.0)) throw std::invalid_argument("run_vs_adversary: L must be > 0");
  const int m = sched.rows, n = sched.cols;

  PlayerState p1 = make_player(n, T, L, opts.p1_start);
  GameTranscript tr;
  tr.rows = m;
  tr.cols = n;
  tr.scale = L;
  tr.beta = p1.beta;
  tr.rounds.reserve(T);
  std::vector<Vec> x_hist, f_hist;
  x_hist.reserve(T);
  f_hist.reserve(T);

  for (long t = 1; t <= T; ++t) {
    const Mat& a = sched.at(t);
    GameRound r;
    r.t = t;
    r.matrix_index = sched.index_at(t);
    r.x = p1.x_play;
    r.eta1 = p1.eta;
    r.f = opponent(t, a, std::span<const Vec>(x_hist), std::span<const Vec>(f_hist));
    if (r.f.size() != m || r.f.minCoeff() < -1e-9 || std::abs(r.f.sum() - 1.0) > 1e-6) {
      std::string diag = "opponent emitted an invalid distribution at round " +
                         std::to_string(t) + ": [";
      for (int i = 0; i < r.f.size(); ++i)
        diag += (i ? "," : "") + std::to_string(r.f[i]);
      throw std::runtime_error(diag + "]");
    }
    r.payoff = r.f.dot(a * r.x);
    const Vec obs1 = a.transpose() * r.f;
    player_update(p1, obs1, obs1);
    r.f_acc = p1.dev_acc;
    x_hist.push_back(r.x);
    f_hist.push_back(r.f);
    tr.rounds.push_back(std::move(r));
  }
  finalize_transcript(tr, sched, opts.minimax_tol);
  return tr;
}

OpponentStrategy honest_opponent(const GameSchedule& sched, double L, const Vec& start) {
  auto p2 = std::make_shared<PlayerState>(
      make_player(sched.rows, sched.horizon(), L, start));
  auto matrices = std::make_shared<GameSchedule>(sched);
  return [p2, matrices](long t, const Mat&, std::span<const Vec> x_hist,
                        std::span<const Vec>) -> Vec {
    if (t > 1) {
      // Lazily absorb the previous round: observe the loss -A_{t-1} x_{t-1}.
      const Vec obs = -(matrices->at(t - 1) * x_hist[t - 2]);
      player_update(*p2, obs, obs);
    }
    return p2->x_play;
  };
}

GameTranscript run_honest_game(const GameSchedule& sched, double L, const GameOptions& opts) {
  return run_vs_adversary(sched, L, honest_opponent(sched, L, opts.p2_start), opts);
}

// ── bound evaluation ───────────────────────────────────────────────────────

bool scale_condition_holds(const GameTranscript& tr) {
  return 2.0 * tr.scale * tr.scale > std::max(tr.c_path_x, tr.c_path_f) + 3.0;
}

double honest_bound_rhs(const GameTranscript& tr) {
  const double T = static_cast<double>(tr.horizon());
  const double L = tr.scale;
  const double n = tr.cols, m = tr.rows;
  const double lgn = std::log(T * T * n), lgm = std::log(T * T * m);
  const double lgnm = std::log(T * T * T * T * n * m);
  return 256.0 * L / T + 1.0 / (2.0 * L) + 4.0 * tr.drift_sum +
         32.0 * L * (lgn * tr.c_path_x + lgm * tr.c_path_f + 2.0 * lgnm) +
         (tr.c_path_x + tr.c_path_f + 4.0) * (20.0 + 4.0 * std::sqrt(tr.drift_sq_sum)) / L;
}

double dishonest_bound_rhs(double c_of_u, double f_acc, double L, long T, int cols) {
  const double lg = std::log(static_cast<double>(T) * static_cast<double>(T) * cols);
  const double root = std::sqrt(f_acc);
  return 2.0 * lg * (c_of_u + 2.0) * (32.0 * L + 2.0 * root / (lg * L)) +
         lg * (L / 2.0) * root;
}

double comparator_regret(const GameSchedule& sched, const GameTranscript& tr,
                         std::span<const Vec> comparators) {
  if (static_cast<long>(comparators.size()) != tr.horizon())
    throw std::invalid_argument("comparator_regret: length mismatch");
  double acc = 0.0;
  for (const auto& r : tr.rounds) {
    const Vec obs = sched.matrices[r.matrix_index].transpose() * r.f;
    acc += obs.dot(r.x - comparators[r.t - 1]);
  }
  return acc;
}

namespace {

Vec column_vertex(int n, int j) {
  Vec v = Vec::Zero(n);
  v[j] = 1.0;
  return v;
}

}  // namespace

std::vector<Vec> best_fixed_column(const GameSchedule& sched, const GameTranscript& tr) {
  Vec score = Vec::Zero(tr.cols);
  for (const auto& r : tr.rounds)
    score += sched.matrices[r.matrix_index].transpose() * r.f;
  const Vec u = column_vertex(tr.cols, argmin_index(score));
  return std::vector<Vec>(tr.horizon(), u);
}

std::vector<Vec> best_segment_columns(const GameSchedule& sched, const GameTranscript& tr) {
  std::vector<Vec> scores(sched.matrices.size(), Vec(Vec::Zero(tr.cols)));
  for (const auto& r : tr.rounds)
    scores[r.matrix_index] += sched.matrices[r.matrix_index].transpose() * r.f;
  std::vector<Vec> out;
  out.reserve(tr.horizon());
  for (const auto& r : tr.rounds)
    out.push_back(column_vertex(tr.cols, argmin_index(scores[r.matrix_index])));
  return out;
}

void write_transcript_csv(const GameTranscript& tr, std::ostream& out) {
  std::string header = "t,matrix,payoff,eta1,eta2,F_acc,A_acc,minimax,sup_payoff";
  for (int j = 0; j < tr.cols; ++j) header += ",x_" + std::to_string(j);
  for (int i = 0; i < tr.rows; ++i) header += ",f_" + std::to_string(i);
  out << header << "\n";
  char buf[40];
  auto put = [&](std::string& line, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += ',';
    line += buf;
  };
  for (const auto& r : tr.rounds) {
    std::string line = std::to_string(r.t) + "," + std::to_string(r.matrix_index);
    put(line, r.payoff);
    put(line, r.eta1);
    put(line, r.eta2);
    put(line, r.f_acc);
    put(line, r.a_acc);
    put(line, r.minimax);
    put(line, r.sup_payoff);
    for (int j = 0; j < tr.cols; ++j) put(line, r.x[j]);
    for (int i = 0; i < tr.rows; ++i) put(line, r.f[i]);
    out << line << "\n";
  }
}

}  // namespace dynreg

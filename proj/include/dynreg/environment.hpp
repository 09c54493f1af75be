#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynreg/geometry.hpp"

namespace dynreg {

// ── loss oracles ───────────────────────────────────────────────────────────

enum class LossKind { LinearSimplex, QuadraticBall };

// One round's loss.  LinearSimplex: f(x) = <c, x>.  QuadraticBall:
// f(x) = (curvature/2) |x - c|^2.  Both expose exact values, gradients,
// the per-round minimizer over the set, and a bound on |f| over the set.
struct LossOracle {
  LossKind kind = LossKind::LinearSimplex;
  Vec c;                  // cost vector / quadratic center
  double curvature = 1.0; // QuadraticBall only
  double g_bound = 0.0;   // certified sup over the set of |f|, filled by generators

  static LossOracle linear(Vec cost);
  static LossOracle quadratic(Vec center, double curvature);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  // Exact minimizer over the set: lowest-index best vertex for linear losses,
  // the (clipped) center for quadratics.
  Vec minimizer(const FeasibleSet& set) const;
  // sup over the set of |f|.
  double value_bound(const FeasibleSet& set) const;
};

// Exact sup over the set of |f_a(x) - f_b(x)|.  Errors if the two oracles
// have different kinds or dimensions.
double sup_variation(const LossOracle& a, const LossOracle& b, const FeasibleSet& set);

// ── scenarios ──────────────────────────────────────────────────────────────

// A named loss sequence over a fixed geometry.  g_bound is the max of the
// per-round value bounds.
struct Scenario {
  std::string name;
  Geometry geometry;
  std::vector<LossOracle> losses;
  double g_bound = 0.0;

  long horizon() const { return static_cast<long>(losses.size()); }
};

// Two experts whose 1/T advantage alternates each round: f_t = (-1/T, 0, ...)
// for even t, (0, -1/T, 0, ...) for odd t.  The per-round minimizer flips
// between the first two vertices every round.
Scenario make_alternating_experts(long T, int d = 2);

// Two experts, one always better: f_t = (-1/2, 0) for even t, (0, 1/2) for
// odd t.  The per-round minimizer is the first vertex throughout.
Scenario make_fixed_best_expert(long T);

// B quadratic batches on the unit ball: batch i repeats the quadratic with
// the given center for rounds_per_batch rounds.  Centers must be feasible.
Scenario make_smooth_batches(int batches, long rounds_per_batch,
                             const std::vector<Vec>& centers, double curvature);

// Quadratics on the unit ball whose center follows a seeded random walk with
// per-step l2 increment sigma, clipped to the ball.  The first center is a
// seeded point in the ball; sigma = 0 gives a stationary sequence.
Scenario make_drifting_minimizer(long T, int dim, double sigma, std::uint64_t seed);

// Seeded i.i.d. linear losses on the simplex with entries uniform in [-1, 1].
Scenario make_random_linear(long T, int d, std::uint64_t seed);

// Seeded i.i.d. quadratics on the unit ball: centers uniform in the ball,
// curvature uniform in [1/2, 2].
Scenario make_random_quadratic(long T, int d, std::uint64_t seed);

}  // namespace dynreg

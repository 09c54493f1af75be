#pragma once

#include <Eigen/Dense>

#include "dynreg/rng.hpp"

namespace dynreg {

// ── feasible sets ──────────────────────────────────────────────────────────

enum class SetKind { Simplex, Ball };

// Probability simplex in R^d, or l2 ball of a given radius and center.
struct FeasibleSet {
  SetKind kind = SetKind::Simplex;
  int dim = 0;
  double radius = 1.0;  // Ball only
  Vec center;           // Ball only

  static FeasibleSet simplex(int d);
  static FeasibleSet ball(int d, double radius, Vec center = Vec());

  bool contains(const Vec& x, double tol = 1e-9) const;
  // Nearest feasible point (radial scaling for the ball; used for clipping
  // generated points, not by the optimization path on the simplex).
  Vec clip(const Vec& x) const;
};

// ── regularizers ───────────────────────────────────────────────────────────

enum class RegKind { NegativeEntropy, HalfSquaredEuclidean };

// entropy_floor is only consulted when Lipschitz-over-a-floored-simplex
// constants are requested; 0 means "derive 1/(d T^2) from the horizon".
struct Regularizer {
  RegKind kind = RegKind::NegativeEntropy;
  double entropy_floor = 0.0;
};

// A feasible set paired with the regularizer whose norm geometry it uses:
// simplex + negative entropy (l1 / l-infinity), ball + half squared
// Euclidean (l2 / l2).
struct Geometry {
  FeasibleSet set;
  Regularizer reg;
};

Geometry make_simplex_geometry(int d);
Geometry make_ball_geometry(int d, double radius = 1.0, Vec center = Vec());

// ── norms and divergences ──────────────────────────────────────────────────

// Norm the regularizer is 1-strongly-convex with respect to.
double primal_norm(const Regularizer& reg, const Vec& v);
// Dual of primal_norm (l-infinity for entropy, l2 for Euclidean).
double dual_norm(const Regularizer& reg, const Vec& v);

// Bregman divergence D_R(x, y).  KL divergence for negative entropy (errors
// if y has a nonpositive entry), half squared distance for Euclidean.
double bregman(const Regularizer& reg, const Vec& x, const Vec& y);

// argmin_x  eta * <x, g> + D_R(x, x_prev)  over the set.
// Entropy on the simplex: exponentiated reweighting with a max shift and a
// final renormalization, so the output sums to one exactly.  Euclidean on the
// ball: gradient step then radial scaling onto the ball.  eta == 0 or g == 0
// return x_prev unchanged.
Vec mirror_step(const Regularizer& reg, const FeasibleSet& set, double eta,
                const Vec& g, const Vec& x_prev);

// ── curvature constants ────────────────────────────────────────────────────

// gamma: Lipschitz constant of D_R(x, .) in the primal norm over the
//   (entropy-floored) set; r_max_sq: sup over feasible pairs of D_R.
// g_bound is a slot for the per-run bound on |f_t|; generators fill it.
struct GeometryConstants {
  double gamma = 0.0;
  double r_max_sq = 0.0;
  double g_bound = 0.0;
};

// Floor used for the entropy constants at a given horizon: the regularizer's
// entropy_floor if set, else 1/(d T^2).
double entropy_floor_for(const Regularizer& reg, const FeasibleSet& set, long horizon);

// Constants for the pairing at a given horizon T >= 1.
//   entropy/simplex (floor e): gamma = r_max_sq = log(1/e) = log(d T^2);
//   Euclidean/ball radius r:   gamma = 2r, r_max_sq = 2 r^2.
GeometryConstants geometry_constants(const Regularizer& reg, const FeasibleSet& set,
                                     long horizon);

// Seeded feasible point; for the entropy pairing the point is kept a floor's
// distance inside the boundary so divergences stay finite.
Vec sample_point(const Geometry& geom, Rng& rng, double floor = 0.0);

}  // namespace dynreg

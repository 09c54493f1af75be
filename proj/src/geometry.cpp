#include "dynreg/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynreg {

// ── feasible sets ──────────────────────────────────────────────────────────

FeasibleSet FeasibleSet::simplex(int d) {
  if (d < 1) throw std::invalid_argument("simplex dimension must be >= 1");
  FeasibleSet s;
  s.kind = SetKind::Simplex;
  s.dim = d;
  return s;
}

FeasibleSet FeasibleSet::ball(int d, double radius, Vec center) {
  if (d < 1) throw std::invalid_argument("ball dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball radius must be positive and finite");
  FeasibleSet s;
  s.kind = SetKind::Ball;
  s.dim = d;
  s.radius = radius;
  s.center = center.size() == 0 ? Vec(Vec::Zero(d)) : std::move(center);
  if (s.center.size() != d) throw std::invalid_argument("ball center dimension mismatch");
  return s;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim) return false;
  if (kind == SetKind::Simplex) {
    if (x.minCoeff() < -tol) return false;
    return std::abs(x.sum() - 1.0) <= tol;
  }
  return (x - center).norm() <= radius + tol;
}

Vec FeasibleSet::clip(const Vec& x) const {
  if (x.size() != dim) throw std::invalid_argument("clip: dimension mismatch");
  if (kind == SetKind::Ball) {
    const Vec d = x - center;
    const double n = d.norm();
    if (n <= radius) return x;
    return center + d * (radius / n);
  }
  // Simplex: drop negative mass and renormalize.
  Vec y = x.cwiseMax(0.0);
  const double s = y.sum();
  if (s <= 0.0) return Vec::Constant(dim, 1.0 / dim);
  return y / s;
}

Geometry make_simplex_geometry(int d) {
  return Geometry{FeasibleSet::simplex(d), Regularizer{RegKind::NegativeEntropy, 0.0}};
}

Geometry make_ball_geometry(int d, double radius, Vec center) {
  return Geometry{FeasibleSet::ball(d, radius, std::move(center)),
                  Regularizer{RegKind::HalfSquaredEuclidean, 0.0}};
}

// ── norms and divergences ──────────────────────────────────────────────────

double primal_norm(const Regularizer& reg, const Vec& v) {
  return reg.kind == RegKind::NegativeEntropy ? v.lpNorm<1>() : v.norm();
}

double dual_norm(const Regularizer& reg, const Vec& v) {
  return reg.kind == RegKind::NegativeEntropy ? v.lpNorm<Eigen::Infinity>() : v.norm();
}

double bregman(const Regularizer& reg, const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
  if (reg.kind == RegKind::HalfSquaredEuclidean) return 0.5 * (x - y).squaredNorm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (y[i] <= 0.0)
      throw std::domain_error("bregman: KL reference point has a nonpositive entry");
    if (x[i] < 0.0) throw std::domain_error("bregman: point has a negative entry");
    if (x[i] > 0.0) acc += x[i] * std::log(x[i] / y[i]);
    // x[i] == 0 contributes 0 by the 0 log 0 convention.
  }
  return acc;
}

Vec mirror_step(const Regularizer& reg, const FeasibleSet& set, double eta,
                const Vec& g, const Vec& x_prev) {
  if (g.size() != set.dim || x_prev.size() != set.dim)
    throw std::invalid_argument("mirror_step: dimension mismatch");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("mirror_step: step size must be finite and >= 0");
  if (!set.contains(x_prev, 1e-9))
    throw std::invalid_argument("mirror_step: previous point is not feasible");
  if (eta == 0.0 || g.isZero(0.0)) return x_prev;

  if (reg.kind == RegKind::NegativeEntropy) {
    // w_i = log x_i - eta g_i, shifted by the max before exponentiating.
    Vec w(set.dim);
    for (int i = 0; i < set.dim; ++i)
      w[i] = (x_prev[i] > 0.0 ? std::log(x_prev[i]) : -std::numeric_limits<double>::infinity()) -
             eta * g[i];
    const double shift = w.maxCoeff();
    Vec x(set.dim);
    for (int i = 0; i < set.dim; ++i) x[i] = std::exp(w[i] - shift);
    const double s = x.sum();
    x /= s;
    if (!set.contains(x, 1e-9)) throw std::runtime_error("mirror_step: left the simplex");
    return x;
  }

  Vec y = x_prev - eta * g;
  const Vec d = y - set.center;
  const double n = d.norm();
  if (n > set.radius) y = set.center + d * (set.radius / n);
  if (!set.contains(y, 1e-9)) throw std::runtime_error("mirror_step: left the ball");
  return y;
}

// ── curvature constants ────────────────────────────────────────────────────

double entropy_floor_for(const Regularizer& reg, const FeasibleSet& set, long horizon) {
  if (horizon < 1) throw std::invalid_argument("entropy_floor_for: horizon must be >= 1");
  if (reg.entropy_floor > 0.0) return reg.entropy_floor;
  return 1.0 / (static_cast<double>(set.dim) * static_cast<double>(horizon) *
                static_cast<double>(horizon));
}

GeometryConstants geometry_constants(const Regularizer& reg, const FeasibleSet& set,
                                     long horizon) {
  if (horizon < 1) throw std::invalid_argument("geometry_constants: horizon must be >= 1");
  GeometryConstants c;
  if (reg.kind == RegKind::HalfSquaredEuclidean) {
    if (set.kind != SetKind::Ball)
      throw std::invalid_argument("geometry_constants: Euclidean regularizer expects a ball");
    c.gamma = 2.0 * set.radius;
    c.r_max_sq = 2.0 * set.radius * set.radius;
    return c;
  }
  if (set.kind != SetKind::Simplex)
    throw std::invalid_argument("geometry_constants: entropy regularizer expects a simplex");
  const double floor = entropy_floor_for(reg, set, horizon);
  if (!(floor > 0.0) || floor > 1.0 / set.dim)
    throw std::invalid_argument("geometry_constants: entropy floor outside (0, 1/d]");
  c.gamma = std::log(1.0 / floor);
  c.r_max_sq = std::log(1.0 / floor);
  return c;
}

Vec sample_point(const Geometry& geom, Rng& rng, double floor) {
  if (geom.set.kind == SetKind::Ball)
    return geom.set.center + rng.ball_point(geom.set.dim, geom.set.radius);
  Vec x = rng.simplex_point(geom.set.dim);
  if (floor > 0.0) {
    // Mix toward uniform so every coordinate clears the floor.
    const int d = geom.set.dim;
    const double lam = std::min(1.0, floor * d);
    x = (1.0 - lam) * x + Vec::Constant(d, lam / d);
  }
  return x;
}

}  // namespace dynreg

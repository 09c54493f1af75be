#include "dynreg/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace dynreg {

// ── loss oracles ───────────────────────────────────────────────────────────

LossOracle LossOracle::linear(Vec cost) {
  LossOracle f;
  f.kind = LossKind::LinearSimplex;
  f.c = std::move(cost);
  return f;
}

LossOracle LossOracle::quadratic(Vec center, double curvature) {
  if (!(curvature > 0.0)) throw std::invalid_argument("quadratic: curvature must be > 0");
  LossOracle f;
  f.kind = LossKind::QuadraticBall;
  f.c = std::move(center);
  f.curvature = curvature;
  return f;
}

double LossOracle::value(const Vec& x) const {
  if (kind == LossKind::LinearSimplex) return c.dot(x);
  return 0.5 * curvature * (x - c).squaredNorm();
}

Vec LossOracle::gradient(const Vec& x) const {
  if (kind == LossKind::LinearSimplex) return c;
  return curvature * (x - c);
}

Vec LossOracle::minimizer(const FeasibleSet& set) const {
  if (c.size() != set.dim) throw std::invalid_argument("minimizer: dimension mismatch");
  if (kind == LossKind::LinearSimplex) {
    if (set.kind != SetKind::Simplex)
      throw std::invalid_argument("minimizer: linear loss expects a simplex");
    // Lowest-index coordinate attaining the minimum.
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < c.size(); ++i)
      if (c[i] < c[best]) best = i;
    Vec v = Vec::Zero(set.dim);
    v[best] = 1.0;
    return v;
  }
  if (set.kind != SetKind::Ball)
    throw std::invalid_argument("minimizer: quadratic loss expects a ball");
  return set.clip(c);
}

double LossOracle::value_bound(const FeasibleSet& set) const {
  if (kind == LossKind::LinearSimplex) return c.lpNorm<Eigen::Infinity>();
  const double reach = set.radius + (c - set.center).norm();
  return 0.5 * curvature * reach * reach;
}

// ── sup variation ──────────────────────────────────────────────────────────

namespace {

// max over 0 <= rho <= r of  (delta/2) rho^2 + pnorm * rho.
double radial_max(double delta, double pnorm, double r) {
  if (delta >= 0.0) return 0.5 * delta * r * r + pnorm * r;
  const double rho = std::min(r, pnorm / (-delta));
  return 0.5 * delta * rho * rho + pnorm * rho;
}

}  // namespace

double sup_variation(const LossOracle& a, const LossOracle& b, const FeasibleSet& set) {
  if (a.kind != b.kind)
    throw std::invalid_argument("sup_variation: mixed loss variants are not supported");
  if (a.c.size() != b.c.size() || a.c.size() != set.dim)
    throw std::invalid_argument("sup_variation: dimension mismatch");

  if (a.kind == LossKind::LinearSimplex) {
    // |<a - b, x>| over the simplex peaks at a vertex.
    return (a.c - b.c).lpNorm<Eigen::Infinity>();
  }

  // g(x) = f_a - f_b is a spherical quadratic: writing x = m + z over the
  // ball of radius r centered at m,
  //   g = (delta/2)|z|^2 + <p, z> + k,   delta = h_a - h_b,
  // so sup |g| reduces to two exact radial maximizations.
  const double delta = a.curvature - b.curvature;
  const Vec w = a.curvature * a.c - b.curvature * b.c;
  const double k0 =
      0.5 * (a.curvature * a.c.squaredNorm() - b.curvature * b.c.squaredNorm());
  const Vec& m = set.center;
  const Vec p = delta * m - w;
  const double k = 0.5 * delta * m.squaredNorm() - w.dot(m) + k0;
  const double pos = radial_max(delta, p.norm(), set.radius) + k;
  const double neg = radial_max(-delta, p.norm(), set.radius) - k;
  return std::max(pos, neg);
}

// ── scenarios ──────────────────────────────────────────────────────────────

namespace {

void finish(Scenario& s) {
  double g = 0.0;
  for (auto& f : s.losses) {
    f.g_bound = f.value_bound(s.geometry.set);
    g = std::max(g, f.g_bound);
  }
  s.g_bound = g;
}

}  // namespace

Scenario make_alternating_experts(long T, int d) {
  if (T < 2) throw std::invalid_argument("alternating-experts: T must be >= 2");
  if (d < 2) throw std::invalid_argument("alternating-experts: d must be >= 2");
  Scenario s;
  s.name = "alternating-experts";
  s.geometry = make_simplex_geometry(d);
  s.losses.reserve(T);
  const double v = -1.0 / static_cast<double>(T);
  for (long t = 1; t <= T; ++t) {
    Vec c = Vec::Zero(d);
    c[t % 2 == 0 ? 0 : 1] = v;
    s.losses.push_back(LossOracle::linear(std::move(c)));
  }
  finish(s);
  return s;
}

Scenario make_fixed_best_expert(long T) {
  if (T < 2) throw std::invalid_argument("fixed-best-expert: T must be >= 2");
  Scenario s;
  s.name = "fixed-best-expert";
  s.geometry = make_simplex_geometry(2);
  s.losses.reserve(T);
  for (long t = 1; t <= T; ++t) {
    Vec c(2);
    if (t % 2 == 0) {
      c << -0.5, 0.0;
    } else {
      c << 0.0, 0.5;
    }
    s.losses.push_back(LossOracle::linear(std::move(c)));
  }
  finish(s);
  return s;
}

Scenario make_smooth_batches(int batches, long rounds_per_batch,
                             const std::vector<Vec>& centers, double curvature) {
  if (batches < 1) throw std::invalid_argument("smooth-batch: need at least one batch");
  if (rounds_per_batch < 1)
    throw std::invalid_argument("smooth-batch: rounds_per_batch must be >= 1");
  if (static_cast<int>(centers.size()) != batches)
    throw std::invalid_argument("smooth-batch: need exactly one center per batch");
  Scenario s;
  s.name = "smooth-batch";
  const int d = centers.empty() ? 2 : static_cast<int>(centers.front().size());
  s.geometry = make_ball_geometry(d, 1.0);
  for (const auto& c : centers)
    if (!s.geometry.set.contains(c, 1e-9))
      throw std::invalid_argument("smooth-batch: batch center outside the unit ball");
  s.losses.reserve(static_cast<std::size_t>(batches) * rounds_per_batch);
  for (int i = 0; i < batches; ++i)
    for (long r = 0; r < rounds_per_batch; ++r)
      s.losses.push_back(LossOracle::quadratic(centers[i], curvature));
  finish(s);
  return s;
}

Scenario make_drifting_minimizer(long T, int dim, double sigma, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("drifting-minimizer: T must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("drifting-minimizer: sigma must be >= 0");
  Scenario s;
  s.name = "drifting-minimizer";
  s.geometry = make_ball_geometry(dim, 1.0);
  Rng rng(seed);
  Vec c = rng.ball_point(dim, 1.0);
  s.losses.reserve(T);
  for (long t = 1; t <= T; ++t) {
    s.losses.push_back(LossOracle::quadratic(c, 1.0));
    if (sigma > 0.0) c = s.geometry.set.clip(c + sigma * rng.unit_direction(dim));
  }
  finish(s);
  return s;
}

Scenario make_random_linear(long T, int d, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("random-linear: T must be >= 1");
  if (d < 1) throw std::invalid_argument("random-linear: d must be >= 1");
  Scenario s;
  s.name = "random-linear";
  s.geometry = make_simplex_geometry(d);
  Rng rng(seed);
  s.losses.reserve(T);
  for (long t = 1; t <= T; ++t) {
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1.0, 1.0);
    s.losses.push_back(LossOracle::linear(std::move(c)));
  }
  finish(s);
  return s;
}

Scenario make_random_quadratic(long T, int d, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("random-quadratic: T must be >= 1");
  if (d < 1) throw std::invalid_argument("random-quadratic: d must be >= 1");
  Scenario s;
  s.name = "random-quadratic";
  s.geometry = make_ball_geometry(d, 1.0);
  Rng rng(seed);
  s.losses.reserve(T);
  for (long t = 1; t <= T; ++t) {
    Vec c = rng.ball_point(d, 1.0);
    const double h = rng.uniform(0.5, 2.0);
    s.losses.push_back(LossOracle::quadratic(std::move(c), h));
  }
  finish(s);
  return s;
}

}  // namespace dynreg

#include "dynreg/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"

using namespace dynreg;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("feasible sets: membership and clipping") {
  const FeasibleSet simp = FeasibleSet::simplex(3);
  CHECK(simp.contains(vec3(0.2, 0.3, 0.5)));
  CHECK(simp.contains(vec3(1.0, 0.0, 0.0)));
  CHECK_FALSE(simp.contains(vec3(0.5, 0.6, -0.1)));
  CHECK_FALSE(simp.contains(vec3(0.5, 0.4, 0.2)));

  const FeasibleSet ball = FeasibleSet::ball(2, 2.0);
  CHECK(ball.contains(vec2(1.2, 1.2)));
  CHECK_FALSE(ball.contains(vec2(2.0, 2.0)));
  const Vec clipped = ball.clip(vec2(6.0, 8.0));
  CHECK(clipped[0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(clipped[1] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(ball.clip(vec2(0.3, -0.4)) == vec2(0.3, -0.4));
}

TEST_CASE("bregman divergence: entropy is KL, euclidean is half squared distance") {
  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const Regularizer euc{RegKind::HalfSquaredEuclidean, 0.0};
  CHECK(bregman(ent, vec2(0.5, 0.5), vec2(0.25, 0.75)) ==
        doctest::Approx(0.14384103622589046).epsilon(1e-14));
  CHECK(bregman(euc, vec2(1.0, 0.0), vec2(0.0, 1.0)) == 1.0);
  CHECK(bregman(ent, vec2(0.3, 0.7), vec2(0.3, 0.7)) == doctest::Approx(0.0));
  // 0 log 0 treated as 0.
  CHECK(std::isfinite(bregman(ent, vec2(0.0, 1.0), vec2(0.5, 0.5))));
  CHECK_THROWS_AS(bregman(ent, vec2(0.5, 0.5), vec2(0.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(bregman(ent, vec2(-0.1, 1.1), vec2(0.5, 0.5)), std::domain_error);
}

TEST_CASE("bregman divergence: 1-strong convexity on sampled pairs") {
  Rng rng(11);
  const Geometry simp = make_simplex_geometry(4);
  const Geometry ball = make_ball_geometry(3, 2.0);
  const double floor = entropy_floor_for(simp.reg, simp.set, 1000);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = sample_point(simp, rng, floor), y = sample_point(simp, rng, floor);
    const double gap = primal_norm(simp.reg, x - y);
    CHECK(bregman(simp.reg, x, y) >= 0.5 * gap * gap - 1e-9);
  }
  for (int i = 0; i < 10000; ++i) {
    const Vec x = sample_point(ball, rng), y = sample_point(ball, rng);
    const double gap = primal_norm(ball.reg, x - y);
    CHECK(bregman(ball.reg, x, y) >= 0.5 * gap * gap - 1e-9);
  }
}

TEST_CASE("norms: l1/l-infinity under entropy, l2/l2 under euclidean") {
  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const Regularizer euc{RegKind::HalfSquaredEuclidean, 0.0};
  CHECK(primal_norm(ent, vec2(0.5, -0.5)) == 1.0);
  CHECK(dual_norm(ent, vec2(0.5, -0.75)) == 0.75);
  CHECK(primal_norm(euc, vec2(3.0, 4.0)) == 5.0);
  CHECK(dual_norm(euc, vec2(3.0, 4.0)) == 5.0);
}

TEST_CASE("mirror step: exponentiated reweighting on the simplex") {
  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const FeasibleSet simp = FeasibleSet::simplex(2);
  const Vec x = mirror_step(ent, simp, 1.0, vec2(1.0, 0.0), vec2(0.5, 0.5));
  CHECK(x[0] == doctest::Approx(0.26894142136999512).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(0.73105857863000488).epsilon(1e-14));
  CHECK(std::abs(x.sum() - 1.0) < 1e-15);  // renormalized

  // Zero coordinates in the previous point are absorbing.
  const Vec z = mirror_step(ent, simp, 0.7, vec2(-3.0, 1.0), vec2(0.0, 1.0));
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 1.0);
}

TEST_CASE("mirror step: projected gradient step on the ball") {
  const Regularizer euc{RegKind::HalfSquaredEuclidean, 0.0};
  const FeasibleSet ball = FeasibleSet::ball(2, 1.0);
  // Interior step is exact subtraction.
  const Vec in = mirror_step(euc, ball, 0.5, vec2(0.4, -0.2), vec2(0.1, 0.2));
  CHECK(in[0] == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(in[1] == doctest::Approx(0.3).epsilon(1e-15));
  // Step past the boundary projects radially.
  const Vec out = mirror_step(euc, ball, 1.0, vec2(-3.0, -4.0), vec2(0.0, 0.0));
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("mirror step: eta or gradient zero returns the previous point") {
  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const FeasibleSet simp = FeasibleSet::simplex(2);
  const Vec p = vec2(0.3, 0.7);
  CHECK(mirror_step(ent, simp, 0.0, vec2(5.0, -1.0), p) == p);
  CHECK(mirror_step(ent, simp, 2.0, vec2(0.0, 0.0), p) == p);
  CHECK_THROWS_AS(mirror_step(ent, simp, 1.0, vec2(1.0, 0.0), vec3(0.2, 0.3, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(mirror_step(ent, simp, -1.0, vec2(1.0, 0.0), p), std::invalid_argument);
  CHECK_THROWS_AS(mirror_step(ent, simp, 1.0, vec2(1.0, 0.0), vec2(0.8, 0.8)),
                  std::invalid_argument);
}

TEST_CASE("mirror step: agrees with grid minimization of the objective") {
  Rng rng(3);
  const Geometry simp = make_simplex_geometry(3);
  const Geometry ball = make_ball_geometry(2, 1.5);
  const double floor = entropy_floor_for(simp.reg, simp.set, 100);
  for (int i = 0; i < 8; ++i) {
    const double eta = rng.uniform(0.05, 1.5);
    Vec g(3), prev = sample_point(simp, rng, floor);
    for (int k = 0; k < 3; ++k) g[k] = rng.uniform(-2.0, 2.0);
    const Vec fast = mirror_step(simp.reg, simp.set, eta, g, prev);
    const Vec slow = oracle::mirror_step_grid(simp.reg, simp.set, eta, g, prev);
    CHECK((fast - slow).lpNorm<Eigen::Infinity>() < 1e-5);
  }
  for (int i = 0; i < 8; ++i) {
    const double eta = rng.uniform(0.05, 1.5);
    Vec g(2), prev = sample_point(ball, rng);
    for (int k = 0; k < 2; ++k) g[k] = rng.uniform(-2.0, 2.0);
    const Vec fast = mirror_step(ball.reg, ball.set, eta, g, prev);
    const Vec slow = oracle::mirror_step_grid(ball.reg, ball.set, eta, g, prev);
    CHECK((fast - slow).lpNorm<Eigen::Infinity>() < 1e-5);
  }
}

TEST_CASE("curvature constants: closed forms and floor validation") {
  const Regularizer euc{RegKind::HalfSquaredEuclidean, 0.0};
  const GeometryConstants bc = geometry_constants(euc, FeasibleSet::ball(3, 1.5), 100);
  CHECK(bc.gamma == doctest::Approx(3.0));
  CHECK(bc.r_max_sq == doctest::Approx(4.5));

  const Regularizer ent{RegKind::NegativeEntropy, 0.0};
  const FeasibleSet simp = FeasibleSet::simplex(2);
  CHECK(entropy_floor_for(ent, simp, 100) == doctest::Approx(1.0 / 20000).epsilon(1e-15));
  const GeometryConstants sc = geometry_constants(ent, simp, 100);
  CHECK(sc.gamma == doctest::Approx(9.903487552536128).epsilon(1e-14));
  CHECK(sc.r_max_sq == doctest::Approx(9.903487552536128).epsilon(1e-14));

  const Regularizer bad{RegKind::NegativeEntropy, 0.9};  // floor > 1/d
  CHECK_THROWS_AS(geometry_constants(bad, simp, 100), std::invalid_argument);
}

TEST_CASE("curvature constants: sampled Lipschitz and diameter invariants") {
  Rng rng(17);
  const Geometry simp = make_simplex_geometry(3);
  const Geometry ball = make_ball_geometry(2, 2.0);
  const long T = 50;
  const double floor = entropy_floor_for(simp.reg, simp.set, T);
  const GeometryConstants sc = geometry_constants(simp.reg, simp.set, T);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = sample_point(simp, rng, floor), y = sample_point(simp, rng, floor),
              z = sample_point(simp, rng, floor);
    CHECK(bregman(simp.reg, x, z) - bregman(simp.reg, y, z) <=
          sc.gamma * primal_norm(simp.reg, x - y) + 1e-9);
    CHECK(bregman(simp.reg, x, y) <= sc.r_max_sq + 1e-9);
  }
  const GeometryConstants bc = geometry_constants(ball.reg, ball.set, T);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = sample_point(ball, rng), y = sample_point(ball, rng),
              z = sample_point(ball, rng);
    CHECK(bregman(ball.reg, x, z) - bregman(ball.reg, y, z) <=
          bc.gamma * primal_norm(ball.reg, x - y) + 1e-9);
    CHECK(bregman(ball.reg, x, y) <= bc.r_max_sq + 1e-9);
  }
}

TEST_CASE("sampled points are feasible and respect the requested floor") {
  Rng rng(5);
  const Geometry simp = make_simplex_geometry(4);
  const Geometry ball = make_ball_geometry(3, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = sample_point(simp, rng, 1e-3);
    CHECK(simp.set.contains(x));
    CHECK(x.minCoeff() >= 1e-3 - 1e-12);
    CHECK(ball.set.contains(sample_point(ball, rng)));
  }
}

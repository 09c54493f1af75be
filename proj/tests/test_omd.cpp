#include "dynreg/omd.hpp"

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "dynreg/aomd.hpp"
#include "dynreg/predictor.hpp"

using namespace dynreg;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("step size: scale over the sum of adjacent accumulator roots") {
  CHECK(step_size(1.0, 5.0, 4.0) == doctest::Approx(0.2360679774997897).epsilon(1e-15));
  CHECK(step_size(2.0, 1.0, 0.0) == 2.0);
  CHECK(step_size(3.0, 0.0, 0.0) == 3.0);  // degenerate accumulators fall back to L
  CHECK(step_size(1.0, 4.0, 4.0) == 0.25);
}

TEST_CASE("initial state: unit deviation seed makes the first step size L") {
  const Geometry g = make_simplex_geometry(2);
  const OmdState s = omd_init(g, vec2(0.5, 0.5), 1.5);
  CHECK(s.eta == 1.5);
  CHECK(s.dev_sum == 1.0);
  CHECK(s.dev_sum_prev == 0.0);
  CHECK(s.round == 1);
  CHECK_THROWS_AS(omd_init(g, vec2(0.8, 0.8), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(omd_init(g, vec2(0.5, 0.5), 0.0), std::invalid_argument);
}

TEST_CASE("one round: play against the guess, then absorb the real gradient") {
  const Geometry g = make_simplex_geometry(2);
  OmdState s = omd_init(g, vec2(0.5, 0.5), 1.0);
  const LossOracle loss = LossOracle::linear(vec2(1.0, 0.0));
  const OmdRound r = omd_round(g, s, vec2(1.0, 0.0), loss);
  // Play = exponential step from the secondary iterate with eta = L = 1.
  CHECK(r.played[0] == doctest::Approx(0.26894142136999512).epsilon(1e-14));
  CHECK(r.played[1] == doctest::Approx(0.73105857863000488).epsilon(1e-14));
  CHECK(r.eta_used == 1.0);
  CHECK(r.grad == vec2(1.0, 0.0));
  CHECK(r.deviation_sq == 0.0);  // the guess was exact
  // Perfect guess leaves the accumulator at its seed; eta halves.
  CHECK(s.dev_sum == 1.0);
  CHECK(s.dev_sum_prev == 1.0);
  CHECK(s.eta == 0.5);
  CHECK(s.round == 2);
  // The secondary iterate took the same step (gradient == guess).
  CHECK(s.x_hat[0] == doctest::Approx(r.played[0]).epsilon(1e-15));
}

TEST_CASE("state invariant: eta always equals the accumulator formula") {
  const Geometry g = make_ball_geometry(2, 1.0);
  Rng rng(31);
  OmdState s = omd_init(g, vec2(0.0, 0.0), 2.0);
  for (int t = 0; t < 50; ++t) {
    const LossOracle loss = LossOracle::quadratic(rng.ball_point(2, 1.0), rng.uniform(0.5, 2.0));
    Vec m(2);
    m << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    const OmdRound r = omd_round(g, s, m, loss);
    CHECK(g.set.contains(r.played));
    CHECK(s.eta ==
          doctest::Approx(step_size(2.0, s.dev_sum, s.dev_sum_prev)).epsilon(1e-15));
    CHECK(s.dev_sum == doctest::Approx(s.dev_sum_prev + r.deviation_sq).epsilon(1e-15));
  }
}

TEST_CASE("full run agrees with an independently coded descent loop") {
  const long T = 200;
  const Scenario sc = make_random_linear(T, 3, 99);
  Predictor pred = Predictor::last_gradient();
  const RunTrace trace = omd_run(sc.geometry, pred, sc.losses, 1.25);

  // Plain re-implementation: multiplicative weights with interleaved guess
  // and correction steps, accumulator-driven step size.
  Vec x_hat = Vec::Constant(3, 1.0 / 3.0);
  double dev = 1.0, dev_prev = 0.0;
  Vec last_grad = Vec::Zero(3);
  for (long t = 0; t < T; ++t) {
    const double eta = 1.25 / (std::sqrt(dev) + std::sqrt(dev_prev));
    const Vec m = t == 0 ? Vec(Vec::Zero(3)) : last_grad;
    Vec x = (x_hat.array() * (-eta * m.array()).exp()).matrix();
    x /= x.sum();
    const Vec grad = sc.losses[t].c;
    Vec next = (x_hat.array() * (-eta * grad.array()).exp()).matrix();
    next /= next.sum();
    x_hat = next;
    dev_prev = dev;
    dev += (grad - m).lpNorm<Eigen::Infinity>() * (grad - m).lpNorm<Eigen::Infinity>();
    last_grad = grad;
    CHECK((trace.actions[t] - x).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(trace.rows[t].eta == doctest::Approx(eta).epsilon(1e-12));
  }
  CHECK(trace.rows.back().d_cum == doctest::Approx(dev - 1.0).epsilon(1e-12));
}

TEST_CASE("static bound helper") {
  CHECK(static_regret_bound(4.0, 9.0) == doctest::Approx(4.0 * 2.0 * 4.0).epsilon(1e-15));
  CHECK(static_regret_bound(1.0, 0.0) == 4.0);
}

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dynreg {

using Vec = Eigen::VectorXd;

// Deterministic random source used everywhere randomness is needed.
//
// All draws are derived from std::mt19937_64 (whose output sequence is fixed
// by the standard) through the explicit mappings below, so a seed pins the
// byte-exact stream on every platform.  Do not route draws through
// std::uniform_real_distribution &c., whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1): top 53 bits of one 64-bit draw.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller on two uniform01 draws.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Uniform direction on the unit sphere in dimension d.
  Vec unit_direction(int d) {
    Vec v(d);
    double n = 0.0;
    while (n == 0.0) {
      for (int i = 0; i < d; ++i) v[i] = normal();
      n = v.norm();
    }
    return v / n;
  }

  // Uniform point in the centered l2 ball of the given radius.
  Vec ball_point(int d, double radius) {
    const Vec dir = unit_direction(d);
    const double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(d));
    return r * dir;
  }

  // Uniform point on the probability simplex (normalized exponential draws).
  Vec simplex_point(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) {
      double u = uniform01();
      while (u <= 0.0) u = uniform01();
      v[i] = -std::log(u);
    }
    return v / v.sum();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dynreg

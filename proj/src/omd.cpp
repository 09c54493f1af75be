#include "dynreg/omd.hpp"

#include <cmath>
#include <stdexcept>

namespace dynreg {

double step_size(double L, double dev_sum, double dev_sum_prev) {
  if (!(L > 0.0)) throw std::invalid_argument("step_size: L must be > 0");
  if (!(dev_sum >= 0.0) || !(dev_sum_prev >= 0.0))
    throw std::invalid_argument("step_size: deviation sums must be >= 0");
  const double denom = std::sqrt(dev_sum) + std::sqrt(dev_sum_prev);
  if (denom == 0.0) return L;  // no deviation observed yet
  return L / denom;
}

OmdState omd_init(const Geometry& geom, const Vec& x0, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("omd_init: L must be > 0");
  if (!geom.set.contains(x0, 1e-9))
    throw std::invalid_argument("omd_init: starting point is not feasible");
  OmdState s;
  s.x_hat = x0;
  s.scale = L;
  s.dev_sum = 1.0;
  s.dev_sum_prev = 0.0;
  s.eta = step_size(L, s.dev_sum, s.dev_sum_prev);
  s.round = 1;
  return s;
}

OmdRound omd_round(const Geometry& geom, OmdState& state, const Vec& m_pred,
                   const LossOracle& loss) {
  OmdRound out;
  out.eta_used = state.eta;
  out.played = mirror_step(geom.reg, geom.set, state.eta, m_pred, state.x_hat);
  out.grad = loss.gradient(out.played);
  const double dev = dual_norm(geom.reg, out.grad - m_pred);
  out.deviation_sq = dev * dev;
  state.x_hat = mirror_step(geom.reg, geom.set, state.eta, out.grad, state.x_hat);
  state.dev_sum_prev = state.dev_sum;
  state.dev_sum += out.deviation_sq;
  state.eta = step_size(state.scale, state.dev_sum, state.dev_sum_prev);
  state.round += 1;
  return out;
}

double static_regret_bound(double r_max_sq, double d_t) {
  if (!(r_max_sq >= 0.0) || !(d_t >= 0.0))
    throw std::invalid_argument("static_regret_bound: inputs must be >= 0");
  return 4.0 * std::sqrt(r_max_sq) * (std::sqrt(d_t) + 1.0);
}

}  // namespace dynreg

#include "dynreg/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dynreg {

double dynamic_regret(std::span<const LossOracle> losses, std::span<const Vec> actions,
                      std::span<const Vec> comparators) {
  if (losses.size() != actions.size() || losses.size() != comparators.size())
    throw std::invalid_argument("dynamic_regret: sequence length mismatch");
  double acc = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t)
    acc += losses[t].value(actions[t]) - losses[t].value(comparators[t]);
  return acc;
}

double regularity(const Regularizer& reg, std::span<const Vec> comparators) {
  if (comparators.empty()) throw std::invalid_argument("regularity: empty sequence");
  double acc = 0.0;
  for (std::size_t t = 1; t < comparators.size(); ++t)
    acc += primal_norm(reg, comparators[t] - comparators[t - 1]);
  return acc;
}

double deviation(const Regularizer& reg, std::span<const Vec> grads,
                 std::span<const Vec> predictions) {
  if (grads.size() != predictions.size())
    throw std::invalid_argument("deviation: sequence length mismatch");
  double acc = 0.0;
  for (std::size_t t = 0; t < grads.size(); ++t) {
    const double d = dual_norm(reg, grads[t] - predictions[t]);
    acc += d * d;
  }
  return acc;
}

double variability(std::span<const LossOracle> losses, const FeasibleSet& set) {
  double acc = 0.0;
  for (std::size_t t = 1; t < losses.size(); ++t)
    acc += sup_variation(losses[t - 1], losses[t], set);
  return acc;
}

double omd_dynamic_bound(double L, double d_t, double c_t_of_u, double gamma, double r_max_sq) {
  if (!(L > 0.0)) throw std::invalid_argument("omd_dynamic_bound: L must be > 0");
  const double root = std::sqrt(1.0 + d_t);
  return 2.0 * root * L + 2.0 * root * (gamma * c_t_of_u + 4.0 * r_max_sq) / L;
}

double omd_drift_bound(double L, double d_t, double c_t_of_u, double v_t, long T,
                  double gamma, double r_max_sq) {
  const double r_max = std::sqrt(r_max_sq);
  if (!(L > 2.0 * r_max))
    throw std::invalid_argument("omd_drift_bound: requires L > 2 R_max");
  double rhs = 4.0 * std::sqrt(1.0 + d_t) * L;
  const double slack = L * L - 4.0 * r_max_sq;
  if (gamma * c_t_of_u > slack)
    rhs += 4.0 * gamma * r_max * static_cast<double>(T) * v_t / slack;
  return rhs;
}

namespace {

double kappa_of(long T, double gamma, double r_max_sq) {
  const double r_max = std::sqrt(r_max_sq);
  return 4.0 + std::log2(2.0 * gamma * r_max * static_cast<double>(T) + 4.0 * r_max_sq) -
         2.0 * std::log2(3.0 * r_max);
}

}  // namespace

double aomd_bound(const ComplexityMeasures& m, long T, double gamma, double r_max_sq,
                    double g_bound) {
  if (T < 1) throw std::invalid_argument("aomd_bound: T must be >= 1");
  if (!(m.c_t >= 0.0) || !(m.d_t >= 0.0) || !(m.v_t >= 0.0) || !(gamma >= 0.0) ||
      !(r_max_sq >= 0.0) || !(g_bound >= 0.0))
    throw std::invalid_argument("aomd_bound: inputs must be >= 0");
  const double kappa = kappa_of(T, gamma, r_max_sq);
  if (!(kappa > 0.0))
    throw std::invalid_argument("aomd_bound: degenerate geometry constants (kappa <= 0)");
  const double r_max = std::sqrt(r_max_sq);
  const double dp1 = m.d_t + 1.0;
  const double path_branch = std::sqrt(dp1 * m.c_t);
  const double var_branch = std::cbrt(dp1 * static_cast<double>(T) * m.v_t);
  const double inner = g_bound + 4.0 * r_max * std::sqrt(dp1) +
                       (2.0 * std::sqrt(gamma) + 2.0 * r_max) *
                           std::min(path_branch, var_branch);
  return kappa * inner;
}

double epoch_count_bound(long T, double gamma, double r_max_sq) {
  const double r_max = std::sqrt(r_max_sq);
  return 2.0 +
         0.5 * std::log2(2.0 * gamma * r_max * static_cast<double>(T) + 4.0 * r_max_sq) -
         std::log2(3.0 * r_max);
}

MinBranch aomd_min_branch(const ComplexityMeasures& m, long T) {
  const double dp1 = m.d_t + 1.0;
  const double path_branch = std::sqrt(dp1 * m.c_t);
  const double var_branch = std::cbrt(dp1 * static_cast<double>(T) * m.v_t);
  return path_branch <= var_branch ? MinBranch::Path : MinBranch::Variability;
}

}  // namespace dynreg

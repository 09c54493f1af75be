#pragma once

#include <span>
#include <vector>

#include "dynreg/environment.hpp"
#include "dynreg/geometry.hpp"

namespace dynreg {

// Cumulative complexity measures through round t: comparator path length c_t
// (primal norm), squared prediction error d_t (dual norm), loss drift v_t.
struct ComplexityMeasures {
  double c_t = 0.0;
  double d_t = 0.0;
  double v_t = 0.0;
};

// sum_t f_t(x_t) - f_t(u_t).
double dynamic_regret(std::span<const LossOracle> losses, std::span<const Vec> actions,
                      std::span<const Vec> comparators);

// sum_{t>=2} |u_t - u_{t-1}| in the geometry's primal norm (round-1 term 0).
double regularity(const Regularizer& reg, std::span<const Vec> comparators);

// sum_t |grad_t - M_t|_*^2 in the geometry's dual norm.  Excludes the unit
// seed the learner's step-size accumulator carries.
double deviation(const Regularizer& reg, std::span<const Vec> grads,
                 std::span<const Vec> predictions);

// sum_{t>=2} sup_x |f_t - f_{t-1}| (round-1 term 0).
double variability(std::span<const LossOracle> losses, const FeasibleSet& set);

// Right-hand sides of the adaptive-rate guarantees, with explicit constants.

// 2 sqrt(1+D) L + 2 sqrt(1+D) (gamma C(u) + 4 R^2) / L.
double omd_dynamic_bound(double L, double d_t, double c_t_of_u, double gamma, double r_max_sq);

// 4 sqrt(1+D) L + [gamma C(u) > L^2 - 4R^2] 4 gamma R T V / (L^2 - 4R^2).
// Requires L > 2 R_max.
double omd_drift_bound(double L, double d_t, double c_t_of_u, double v_t, long T,
                  double gamma, double r_max_sq);

// kappa (G + 4R sqrt(D+1) + (2 sqrt(gamma) + 2R) min{sqrt((D+1)C),
// ((D+1) T V)^(1/3)}) with kappa = 4 + log2(2 gamma R T + 4R^2) - 2 log2(3R).
// Errors if kappa <= 0.
double aomd_bound(const ComplexityMeasures& m, long T, double gamma, double r_max_sq,
                    double g_bound);

// Doubling-epoch count bound: 2 + log2(2 gamma R T + 4R^2)/2 - log2(3R).
double epoch_count_bound(long T, double gamma, double r_max_sq);

// Which branch of the adaptive bound's min is smaller for these measures.
enum class MinBranch { Path, Variability };
MinBranch aomd_min_branch(const ComplexityMeasures& m, long T);

}  // namespace dynreg

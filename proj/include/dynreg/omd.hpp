#pragma once

#include "dynreg/environment.hpp"
#include "dynreg/geometry.hpp"

namespace dynreg {

// Learner state between rounds.  After completing round t-1:
//   x_hat       secondary iterate
//   dev_sum      1 + sum_{s<=t-1} |grad_s - M_s|_*^2   (unit seed at s=0)
//   dev_sum_prev 1 + sum_{s<=t-2} ... (0 before any round)
//   eta          step size for round t = scale / (sqrt(dev_sum) + sqrt(dev_sum_prev))
struct OmdState {
  Vec x_hat;
  double eta = 0.0;
  double dev_sum = 1.0;
  double dev_sum_prev = 0.0;
  double scale = 1.0;  // L
  long round = 1;      // next round to play
};

// eta = L / (sqrt(dev_sum) + sqrt(dev_sum_prev)).
double step_size(double L, double dev_sum, double dev_sum_prev);

// Fresh state at x0 with scale L: dev_sum = 1 (unit seed), eta = L.
OmdState omd_init(const Geometry& geom, const Vec& x0, double L);

struct OmdRound {
  Vec played;           // x_t
  Vec grad;             // grad f_t(x_t)
  double deviation_sq;  // |grad - m_pred|_*^2
  double eta_used;      // step size the round was played with
};

// One full round against the prediction m_pred: primary step from x_hat with
// eta and m_pred gives x_t; the realized gradient then moves x_hat; deviation
// sums and the next eta are updated in place.
OmdRound omd_round(const Geometry& geom, OmdState& state, const Vec& m_pred,
                   const LossOracle& loss);

// Upper bound on static regret under the scale L = R_max tuning:
// 4 R_max (sqrt(D_T) + 1).
double static_regret_bound(double r_max_sq, double d_t);

}  // namespace dynreg

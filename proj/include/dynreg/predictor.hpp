#pragma once

#include <string>
#include <vector>

#include "dynreg/environment.hpp"

namespace dynreg {

// What a predictor may look at before round t is played: strictly pre-round
// information (gradients and losses through t-1, the learner's secondary
// iterate).  Nulls at t = 1.
struct PredictorContext {
  long round = 1;
  int dim = 0;
  const Vec* last_gradient = nullptr;  // grad of f_{t-1} at x_{t-1}
  const LossOracle* last_loss = nullptr;
  const Vec* x_hat_prev = nullptr;     // secondary iterate after round t-1
};

enum class PredictorKind {
  Zero,                 // M_t = 0
  LastGradient,         // M_t = grad f_{t-1}(x_{t-1}); 0 at t = 1
  SmoothBatchGradient,  // M_t = grad f_{t-1}(x_hat_{t-1}); 0 at t = 1
  External              // M_t read from a supplied stream
};

// Gradient-guess source for the optimistic step.  SmoothBatchGradient
// re-evaluates the previous round's loss at the current secondary iterate,
// which inside a batch of repeated smooth losses equals the fresh gradient.
class Predictor {
 public:
  static Predictor zero();
  static Predictor last_gradient();
  static Predictor smooth_batch();
  static Predictor external(std::vector<Vec> stream);

  // Loads one dual vector per CSV row (components as columns).
  static Predictor external_from_csv(const std::string& path, int dim);

  Vec predict(const PredictorContext& ctx);
  PredictorKind kind() const { return kind_; }

 private:
  explicit Predictor(PredictorKind k) : kind_(k) {}
  PredictorKind kind_;
  std::vector<Vec> stream_;
  std::size_t cursor_ = 0;
};

PredictorKind predictor_kind_from_name(const std::string& name);

}  // namespace dynreg

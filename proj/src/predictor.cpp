#include "dynreg/predictor.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynreg {

Predictor Predictor::zero() { return Predictor(PredictorKind::Zero); }
Predictor Predictor::last_gradient() { return Predictor(PredictorKind::LastGradient); }
Predictor Predictor::smooth_batch() { return Predictor(PredictorKind::SmoothBatchGradient); }

Predictor Predictor::external(std::vector<Vec> stream) {
  Predictor p(PredictorKind::External);
  p.stream_ = std::move(stream);
  return p;
}

Predictor Predictor::external_from_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open prediction file: " + path);
  std::vector<Vec> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": not a number: '" + cell + "'");
      }
    }
    if (static_cast<int>(vals.size()) != dim)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(dim) + " columns, got " +
                               std::to_string(vals.size()));
    rows.push_back(Eigen::Map<Vec>(vals.data(), dim));
  }
  return external(std::move(rows));
}

Vec Predictor::predict(const PredictorContext& ctx) {
  switch (kind_) {
    case PredictorKind::Zero:
      return Vec::Zero(ctx.dim);
    case PredictorKind::LastGradient:
      return ctx.last_gradient ? *ctx.last_gradient : Vec(Vec::Zero(ctx.dim));
    case PredictorKind::SmoothBatchGradient:
      if (!ctx.last_loss || !ctx.x_hat_prev) return Vec::Zero(ctx.dim);
      return ctx.last_loss->gradient(*ctx.x_hat_prev);
    case PredictorKind::External:
      if (cursor_ >= stream_.size())
        throw std::runtime_error("external predictor stream exhausted at round " +
                                 std::to_string(ctx.round));
      if (stream_[cursor_].size() != ctx.dim)
        throw std::runtime_error("external prediction dimension mismatch at round " +
                                 std::to_string(ctx.round));
      return stream_[cursor_++];
  }
  throw std::logic_error("unreachable predictor kind");
}

PredictorKind predictor_kind_from_name(const std::string& name) {
  if (name == "zero") return PredictorKind::Zero;
  if (name == "last-gradient") return PredictorKind::LastGradient;
  if (name == "smooth-batch") return PredictorKind::SmoothBatchGradient;
  if (name == "external") return PredictorKind::External;
  throw std::invalid_argument("unknown predictor: " + name);
}

}  // namespace dynreg

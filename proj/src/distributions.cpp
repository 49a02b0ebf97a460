#include "sdhmc/distributions.hpp"

#include <algorithm>

namespace sdhmc {

int categorical_sample(std::span<const double> log_weights, Rng& rng) {
  if (log_weights.empty()) {
    throw std::invalid_argument("categorical_sample: empty weight vector");
  }
  double hi = kNegInf;
  for (double w : log_weights) {
    if (std::isnan(w)) {
      throw std::invalid_argument("categorical_sample: NaN weight");
    }
    if (w > hi) hi = w;
  }
  if (hi == kNegInf) {
    throw std::invalid_argument("categorical_sample: all weights are zero");
  }
  double total = 0.0;
  for (double w : log_weights) {
    total += std::exp(w - hi);
  }
  double u = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < log_weights.size(); ++i) {
    acc += std::exp(log_weights[i] - hi);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(log_weights.size() - 1);
}

}  // namespace sdhmc

#include "sdhmc/math.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdhmc {

EvalCounters& eval_counters() {
  thread_local EvalCounters counters;
  return counters;
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  eval_counters().lse_terms += terms.size();
  double hi = *std::max_element(terms.begin(), terms.end());
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) {
    acc += std::exp(t - hi);
  }
  return hi + std::log(acc);
}

void log_softmax(std::span<const double> u, std::span<double> out) {
  if (u.size() != out.size()) {
    throw std::invalid_argument("log_softmax: size mismatch");
  }
  double norm = log_sum_exp(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u[i] - norm;
  }
}

std::vector<double> log_softmax(std::span<const double> u) {
  std::vector<double> out(u.size());
  log_softmax(u, out);
  return out;
}

}  // namespace sdhmc

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "sdhmc/counters.hpp"

namespace sdhmc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), safe against overflow; -inf operands drop out.
inline double log_add_exp(double a, double b) {
  eval_counters().lse_terms += 2;
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// log(sum_i exp(terms[i])) via the max-shift trick.
// Empty input is a usage error; all -inf yields -inf.
double log_sum_exp(std::span<const double> terms);

inline double sigmoid(double u) {
  if (u >= 0.0) {
    return 1.0 / (1.0 + std::exp(-u));
  }
  double e = std::exp(u);
  return e / (1.0 + e);
}

// out[i] = u[i] - log_sum_exp(u); out may alias u.
void log_softmax(std::span<const double> u, std::span<double> out);

std::vector<double> log_softmax(std::span<const double> u);

}  // namespace sdhmc

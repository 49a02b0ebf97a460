#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "sdhmc/autodiff.hpp"
#include "sdhmc/counters.hpp"
#include "sdhmc/math.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

inline constexpr double kLogTwoPi = 1.8378770664093453;

// Log densities come in a plain flavor and a tape-recording flavor. The
// recording flavor registers one tape node with analytic partials.

inline double normal_logpdf(double mu, double sigma, double v) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("normal_logpdf: sigma must be positive");
  }
  ++eval_counters().dist_evals;
  double z = (v - mu) / sigma;
  return -std::log(sigma) - 0.5 * kLogTwoPi - 0.5 * z * z;
}

inline Dual normal_logpdf(const Dual& mu, const Dual& sigma, const Dual& v) {
  if (!(sigma.value > 0.0)) {
    throw std::invalid_argument("normal_logpdf: sigma must be positive");
  }
  ++eval_counters().dist_evals;
  double inv = 1.0 / sigma.value;
  double z = (v.value - mu.value) * inv;
  double value = -std::log(sigma.value) - 0.5 * kLogTwoPi - 0.5 * z * z;
  return detail::make3(value, mu, z * inv, sigma, (z * z - 1.0) * inv, v,
                       -z * inv);
}

inline double bernoulli_logpmf(double p, bool v) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli_logpmf: p must lie in [0, 1]");
  }
  ++eval_counters().dist_evals;
  return v ? std::log(p) : std::log1p(-p);
}

inline Dual bernoulli_logpmf(const Dual& p, bool v) {
  if (!(p.value >= 0.0 && p.value <= 1.0)) {
    throw std::invalid_argument("bernoulli_logpmf: p must lie in [0, 1]");
  }
  ++eval_counters().dist_evals;
  double value = v ? std::log(p.value) : std::log1p(-p.value);
  double dp = v ? 1.0 / p.value : -1.0 / (1.0 - p.value);
  return detail::make1(value, p, dp);
}

// Support is the open interval (0, 1); endpoints return -inf.
inline double beta_logpdf(double alpha, double beta, double v) {
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("beta_logpdf: shape parameters must be positive");
  }
  ++eval_counters().dist_evals;
  if (!(v > 0.0 && v < 1.0)) return kNegInf;
  double out = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
  if (alpha != 1.0) out += (alpha - 1.0) * std::log(v);
  if (beta != 1.0) out += (beta - 1.0) * std::log1p(-v);
  return out;
}

inline Dual beta_logpdf(double alpha, double beta, const Dual& v) {
  double value = beta_logpdf(alpha, beta, v.value);
  if (value == kNegInf) return {value};
  double dv = (alpha - 1.0) / v.value - (beta - 1.0) / (1.0 - v.value);
  return detail::make1(value, v, dv);
}

// --- samplers ---

inline double normal_sample(double mu, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("normal_sample: sigma must be positive");
  }
  return rng.normal(mu, sigma);
}

inline bool bernoulli_sample(double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli_sample: p must lie in [0, 1]");
  }
  return rng.bernoulli(p);
}

inline double uniform_sample(double lo, double hi, Rng& rng) {
  if (!(lo < hi)) {
    throw std::invalid_argument("uniform_sample: lo must be below hi");
  }
  return rng.uniform(lo, hi);
}

// Draws an index proportional to exp(log_weights[i]). Consumes exactly one
// uniform variate, so callers stay reproducible across categorical sizes.
int categorical_sample(std::span<const double> log_weights, Rng& rng);

}  // namespace sdhmc

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdhmc/grad_estimator.hpp"
#include "sdhmc/model.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

struct SamplerConfig {
  int n_samples_out = 10000;
  int steps_per_sample = 10;
  double step_size = 0.0;
  // sghmc only; negative means "use the default 0.1 * step_size".
  double friction = -1.0;
  int grad_estimate_samples = 1;  // sghmc only
  std::uint64_t seed = 0;
};

void validate_config(const SamplerConfig& config);

struct Chain {
  std::vector<Trace> draws;  // unconstrained traces
  std::string scheme;
  SamplerConfig config;
  double wall_time_s = 0.0;
  long accepted = 0;  // Metropolis-corrected schemes only
  long divergences = 0;
  std::uint64_t dist_evals = 0;
};

// A chain that cannot continue (sgHMC ran into a non-finite state).
class ChainAbort : public std::runtime_error {
 public:
  ChainAbort(const std::string& what, long step)
      : std::runtime_error(what + " at update " + std::to_string(step)),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Standard HMC with exact marginal gradients and Metropolis correction.
Chain hmc(const MarginalizedModel& model, Trace x0, const SamplerConfig& config,
          Rng& rng);

// Stochastic-gradient HMC: every update refreshes z and applies the
// friction-corrected kick with the estimated gradient; no correction step.
Chain sghmc(const StochasticModel& model, Trace x0, const SamplerConfig& config,
            Rng& rng, NuisanceKernel kernel = NuisanceKernel::gibbs);

// Alternating baseline: one sitewise-MH sweep on z, then one corrected HMC
// iteration on x at the frozen z.
Chain composing_mh_hmc(const StochasticModel& model, Trace x0,
                       const SamplerConfig& config, Rng& rng);

// Standard-normal start in unconstrained space.
Trace random_init(int dim, Rng& rng);

namespace detail {

struct LeapfrogResult {
  double value = 0.0;  // log density at the final position
  bool finite = false;
};

inline bool all_finite(std::span<const double> v) {
  for (double e : v) {
    if (!std::isfinite(e)) return false;
  }
  return true;
}

// Advances (x, p) by n leapfrog steps of size eps along grad_fn's density.
// g must hold the gradient at the entry x; on success it holds the gradient
// at the final x. grad_fn(x, g) fills g and returns the log density.
template <class F>
LeapfrogResult leapfrog(F&& grad_fn, std::vector<double>& x,
                        std::vector<double>& p, std::vector<double>& g,
                        double eps, int n) {
  std::size_t dim = x.size();
  for (std::size_t j = 0; j < dim; ++j) {
    p[j] += 0.5 * eps * g[j];
  }
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      x[j] += eps * p[j];
    }
    value = grad_fn(x, g);
    if (std::isnan(value) || !all_finite(g)) {
      return {value, false};
    }
    double scale = (i + 1 < n) ? eps : 0.5 * eps;
    for (std::size_t j = 0; j < dim; ++j) {
      p[j] += scale * g[j];
    }
  }
  return {value, true};
}

}  // namespace detail

}  // namespace sdhmc

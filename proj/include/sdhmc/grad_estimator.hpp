#pragma once

#include <span>

#include "sdhmc/model.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

// How z is refreshed between the averaged gradient draws. prior_draw
// ignores the conditional entirely; it exists to demonstrate the bias of
// the naive estimator in tests and is not used by any sampler.
enum class NuisanceKernel { gibbs, sitewise_mh, prior_draw };

struct GradientEstimate {
  std::vector<double> grad;
  double log_joint_at_draw = 0.0;
  Nuisance z;  // last z drawn; thread back in to keep the z-chain warm
};

struct EstimatorOptions {
  int n_samples = 1;
  NuisanceKernel kernel = NuisanceKernel::gibbs;
  int sweeps_per_sample = 1;
};

// Averages grad_x log_joint(x, z_i) over n_samples refreshed draws of z.
GradientEstimate estimate_gradient(const StochasticModel& model,
                                   std::span<const double> x, Nuisance z,
                                   const EstimatorOptions& options, Rng& rng);

GradientEstimate estimate_gradient(const StochasticModel& model,
                                   std::span<const double> x, Nuisance z,
                                   int n_samples, Rng& rng);

}  // namespace sdhmc

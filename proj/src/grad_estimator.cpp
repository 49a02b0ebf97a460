#include "sdhmc/grad_estimator.hpp"

#include <stdexcept>

#include "sdhmc/nuisance.hpp"

namespace sdhmc {

GradientEstimate estimate_gradient(const StochasticModel& model,
                                   std::span<const double> x, Nuisance z,
                                   const EstimatorOptions& options, Rng& rng) {
  if (options.n_samples < 1) {
    throw std::invalid_argument("estimate_gradient: n_samples must be >= 1");
  }
  if (options.sweeps_per_sample < 1) {
    throw std::invalid_argument(
        "estimate_gradient: sweeps_per_sample must be >= 1");
  }
  GradientEstimate est;
  est.z = std::move(z);
  est.grad.assign(x.size(), 0.0);
  for (int i = 0; i < options.n_samples; ++i) {
    for (int s = 0; s < options.sweeps_per_sample; ++s) {
      switch (options.kernel) {
        case NuisanceKernel::gibbs:
          gibbs_sweep(model, x, est.z, rng);
          break;
        case NuisanceKernel::sitewise_mh:
          mh_sweep(model, x, est.z, rng);
          break;
        case NuisanceKernel::prior_draw:
          est.z = model.sample_nuisance_prior(rng);
          break;
      }
    }
    auto [value, g] = log_joint_grad(model, x, est.z);
    est.log_joint_at_draw = value;
    // Running mean keeps the single-draw path and the averaged path exactly
    // consistent when every draw is identical.
    double inv = 1.0 / static_cast<double>(i + 1);
    for (std::size_t j = 0; j < g.size(); ++j) {
      est.grad[j] += (g[j] - est.grad[j]) * inv;
    }
  }
  return est;
}

GradientEstimate estimate_gradient(const StochasticModel& model,
                                   std::span<const double> x, Nuisance z,
                                   int n_samples, Rng& rng) {
  EstimatorOptions options;
  options.n_samples = n_samples;
  return estimate_gradient(model, x, std::move(z), options, rng);
}

}  // namespace sdhmc

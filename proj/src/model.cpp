#include "sdhmc/model.hpp"

#include "sdhmc/nuisance.hpp"

namespace sdhmc {

void ModelInfo::canonicalize(std::span<double>) const {}

void StochasticModel::begin_sweep(std::span<const double>) const {}

Nuisance resample_nuisance(const StochasticModel& model,
                           std::span<const double> x, Nuisance z, Rng& rng) {
  gibbs_sweep(model, x, z, rng);
  return z;
}

std::pair<double, std::vector<double>> log_joint_grad(
    const StochasticModel& model, std::span<const double> x,
    const Nuisance& z) {
  return grad(
      [&](std::span<const Dual> xs) { return model.log_joint(xs, z); }, x);
}

std::pair<double, std::vector<double>> marginal_grad(
    const MarginalizedModel& model, std::span<const double> x) {
  return grad(
      [&](std::span<const Dual> xs) { return model.marginal_log_density(xs); },
      x);
}

}  // namespace sdhmc

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdhmc/model.hpp"

namespace sdhmc {

// Exhaustive sweeps over small nuisance spaces. These back the oracle
// checks; they throw if the space exceeds `limit` assignments.

std::uint64_t nuisance_space_size(const StochasticModel& model,
                                  std::uint64_t limit = 1u << 22);

// Visits every assignment in odometer order (site 0 varies fastest).
void for_each_nuisance(const StochasticModel& model,
                       const std::function<void(const Nuisance&)>& fn);

// log sum over z of [nuisance prior + log_joint]: the marginal density a
// correct marginalized form must reproduce.
double enumerated_marginal(const StochasticModel& model,
                           std::span<const double> x);

// Normalized posterior p(z|x,y), aligned with for_each_nuisance order.
std::vector<double> enumerated_posterior(const StochasticModel& model,
                                         std::span<const double> x);

// Exact estimator expectation: sum_z p(z|x,y) * grad_x log_joint(x, z).
std::vector<double> enumerated_posterior_gradient(const StochasticModel& model,
                                                  std::span<const double> x);

// Expectation under the nuisance prior instead of the posterior; the
// negative control that a prior-draw gradient estimator converges to.
std::vector<double> enumerated_prior_gradient(const StochasticModel& model,
                                              std::span<const double> x);

}  // namespace sdhmc

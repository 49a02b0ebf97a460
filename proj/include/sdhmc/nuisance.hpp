#pragma once

#include <span>

#include "sdhmc/model.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

// Sitewise kernels over a model's discrete sites. Both visit sites in
// ascending order, mutate z in place, and leave p(z|x,y) invariant.

// Draws each site from its exact full conditional.
void gibbs_sweep(const StochasticModel& model, std::span<const double> x,
                 Nuisance& z, Rng& rng);

// Proposes uniformly from the site's support excluding the current value
// and accepts with min(1, conditional-weight ratio).
void mh_sweep(const StochasticModel& model, std::span<const double> x,
              Nuisance& z, Rng& rng);

}  // namespace sdhmc

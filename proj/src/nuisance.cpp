#include "sdhmc/nuisance.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sdhmc/distributions.hpp"
#include "sdhmc/math.hpp"

namespace sdhmc {

namespace {

bool all_impossible(std::span<const double> log_weights) {
  for (double w : log_weights) {
    if (w > kNegInf) return false;
  }
  return true;
}

}  // namespace

void gibbs_sweep(const StochasticModel& model, std::span<const double> x,
                 Nuisance& z, Rng& rng) {
  if (static_cast<int>(z.size()) != model.site_count()) {
    throw std::invalid_argument("gibbs_sweep: nuisance size mismatch");
  }
  model.begin_sweep(x);
  std::vector<double> weights;
  for (int site = 0; site < model.site_count(); ++site) {
    int m = model.site_cardinality(site);
    if (m == 1) {
      z[site] = 0;
      continue;
    }
    weights.resize(m);
    model.site_conditional(site, x, z, weights);
    if (all_impossible(weights)) {
      throw EvaluationError("gibbs_sweep: conditional has no mass",
                            static_cast<std::uint32_t>(site));
    }
    z[site] = categorical_sample(weights, rng);
  }
}

void mh_sweep(const StochasticModel& model, std::span<const double> x,
              Nuisance& z, Rng& rng) {
  if (static_cast<int>(z.size()) != model.site_count()) {
    throw std::invalid_argument("mh_sweep: nuisance size mismatch");
  }
  model.begin_sweep(x);
  std::vector<double> weights;
  for (int site = 0; site < model.site_count(); ++site) {
    int m = model.site_cardinality(site);
    if (m == 1) continue;
    weights.resize(m);
    model.site_conditional(site, x, z, weights);
    if (all_impossible(weights)) {
      throw EvaluationError("mh_sweep: conditional has no mass",
                            static_cast<std::uint32_t>(site));
    }
    int cur = z[site];
    int prop = static_cast<int>(rng.uniform01() * (m - 1));
    if (prop >= m - 1) prop = m - 2;  // guard the u == 1 - ulp edge
    if (prop >= cur) ++prop;
    double log_ratio = weights[prop] - weights[cur];
    if (log_ratio >= 0.0 || std::log(rng.uniform01()) < log_ratio) {
      z[site] = prop;
    }
  }
}

}  // namespace sdhmc

#include "sdhmc/models/two_normals.hpp"

#include <cmath>

#include "sdhmc/distributions.hpp"

namespace sdhmc {

namespace {
const double kLogHalf = std::log(0.5);
}

template <class S>
S TwoNormalsModel::joint_impl(std::span<const S> x, const Nuisance& z) const {
  double mean = z[0] == 1 ? 1.0 : -1.0;
  return normal_logpdf(mean, 0.5, x[0]);
}

template <class S>
S TwoNormalsModel::marginal_impl(std::span<const S> x) const {
  return log_add_exp(normal_logpdf(1.0, 0.5, x[0]) + kLogHalf,
                     normal_logpdf(-1.0, 0.5, x[0]) + kLogHalf);
}

double TwoNormalsModel::log_joint(std::span<const double> x,
                                  const Nuisance& z) const {
  return joint_impl(x, z);
}

Dual TwoNormalsModel::log_joint(std::span<const Dual> x,
                                const Nuisance& z) const {
  return joint_impl(x, z);
}

double TwoNormalsModel::marginal_log_density(std::span<const double> x) const {
  return marginal_impl(x);
}

Dual TwoNormalsModel::marginal_log_density(std::span<const Dual> x) const {
  return marginal_impl(x);
}

void TwoNormalsModel::site_conditional(int, std::span<const double> x,
                                       const Nuisance&,
                                       std::span<double> log_weights) const {
  log_weights[0] = kLogHalf + normal_logpdf(-1.0, 0.5, x[0]);
  log_weights[1] = kLogHalf + normal_logpdf(1.0, 0.5, x[0]);
}

double TwoNormalsModel::nuisance_log_prior(const Nuisance&) const {
  return kLogHalf;
}

Nuisance TwoNormalsModel::sample_nuisance_prior(Rng& rng) const {
  return {rng.bernoulli(0.5) ? 1 : 0};
}

}  // namespace sdhmc

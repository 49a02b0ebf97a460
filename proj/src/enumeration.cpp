#include "sdhmc/enumeration.hpp"

#include <cmath>
#include <stdexcept>

#include "sdhmc/math.hpp"

namespace sdhmc {

std::uint64_t nuisance_space_size(const StochasticModel& model,
                                  std::uint64_t limit) {
  std::uint64_t total = 1;
  for (int site = 0; site < model.site_count(); ++site) {
    total *= static_cast<std::uint64_t>(model.site_cardinality(site));
    if (total > limit) {
      throw std::invalid_argument("nuisance_space_size: space too large");
    }
  }
  return total;
}

void for_each_nuisance(const StochasticModel& model,
                       const std::function<void(const Nuisance&)>& fn) {
  nuisance_space_size(model);
  int sites = model.site_count();
  Nuisance z(sites, 0);
  while (true) {
    fn(z);
    int site = 0;
    while (site < sites) {
      if (++z[site] < model.site_cardinality(site)) break;
      z[site] = 0;
      ++site;
    }
    if (site == sites) break;
  }
}

double enumerated_marginal(const StochasticModel& model,
                           std::span<const double> x) {
  std::vector<double> terms;
  for_each_nuisance(model, [&](const Nuisance& z) {
    terms.push_back(model.nuisance_log_prior(z) + model.log_joint(x, z));
  });
  return log_sum_exp(terms);
}

std::vector<double> enumerated_posterior(const StochasticModel& model,
                                         std::span<const double> x) {
  std::vector<double> logw;
  for_each_nuisance(model, [&](const Nuisance& z) {
    logw.push_back(model.nuisance_log_prior(z) + model.log_joint(x, z));
  });
  std::vector<double> post(logw.size());
  log_softmax(logw, post);
  for (double& w : post) {
    w = std::exp(w);
  }
  return post;
}

namespace {

std::vector<double> weighted_gradient(const StochasticModel& model,
                                      std::span<const double> x,
                                      bool posterior_weights) {
  std::vector<std::vector<double>> grads;
  std::vector<double> logw;
  for_each_nuisance(model, [&](const Nuisance& z) {
    grads.push_back(log_joint_grad(model, x, z).second);
    logw.push_back(model.nuisance_log_prior(z) +
                   (posterior_weights ? model.log_joint(x, z) : 0.0));
  });
  std::vector<double> weights(logw.size());
  log_softmax(logw, weights);
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    double w = std::exp(weights[i]);
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] += w * grads[i][j];
    }
  }
  return out;
}

}  // namespace

std::vector<double> enumerated_posterior_gradient(const StochasticModel& model,
                                                  std::span<const double> x) {
  return weighted_gradient(model, x, true);
}

std::vector<double> enumerated_prior_gradient(const StochasticModel& model,
                                              std::span<const double> x) {
  return weighted_gradient(model, x, false);
}

}  // namespace sdhmc

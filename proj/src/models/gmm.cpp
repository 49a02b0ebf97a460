#include "sdhmc/models/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sdhmc/distributions.hpp"

namespace sdhmc {

GmmModel::GmmModel(std::vector<double> data, int n_components)
    : data_(std::move(data)),
      n_components_(n_components),
      log_weight_(-std::log(static_cast<double>(n_components))) {
  if (data_.empty()) {
    throw std::invalid_argument("GmmModel: no observations");
  }
  if (n_components_ < 1) {
    throw std::invalid_argument("GmmModel: need at least one component");
  }
}

std::vector<std::string> GmmModel::param_names() const {
  std::vector<std::string> names;
  for (int j = 0; j < n_components_; ++j) {
    names.push_back("mu" + std::to_string(j));
    names.push_back("sigma" + std::to_string(j));
  }
  return names;
}

std::vector<double> GmmModel::constrained(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (int j = 0; j < n_components_; ++j) {
    out[2 * j] = x[2 * j];
    out[2 * j + 1] = std::exp(x[2 * j + 1]);
  }
  return out;
}

void GmmModel::canonicalize(std::span<double> params) const {
  std::vector<int> order(n_components_);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return params[2 * a] < params[2 * b];
  });
  std::vector<double> sorted(params.size());
  for (int j = 0; j < n_components_; ++j) {
    sorted[2 * j] = params[2 * order[j]];
    sorted[2 * j + 1] = params[2 * order[j] + 1];
  }
  std::copy(sorted.begin(), sorted.end(), params.begin());
}

template <class S>
S GmmModel::joint_impl(std::span<const S> x, const Nuisance& z) const {
  using std::exp;
  S ll = 0.0;
  for (const S& xi : x) {
    ll += normal_logpdf(0.0, 10.0, xi);
  }
  std::vector<S> mu(n_components_), sigma(n_components_);
  for (int j = 0; j < n_components_; ++j) {
    mu[j] = x[2 * j];
    sigma[j] = exp(x[2 * j + 1]);
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    int j = z[i];
    ll += normal_logpdf(mu[j], sigma[j], S(data_[i]));
  }
  return ll;
}

template <class S>
S GmmModel::marginal_impl(std::span<const S> x) const {
  using std::exp;
  S ll = 0.0;
  for (const S& xi : x) {
    ll += normal_logpdf(0.0, 10.0, xi);
  }
  std::vector<S> mu(n_components_), sigma(n_components_);
  for (int j = 0; j < n_components_; ++j) {
    mu[j] = x[2 * j];
    sigma[j] = exp(x[2 * j + 1]);
  }
  std::vector<S> terms(n_components_);
  for (double v : data_) {
    for (int j = 0; j < n_components_; ++j) {
      terms[j] = normal_logpdf(mu[j], sigma[j], S(v)) + log_weight_;
    }
    ll += log_sum_exp(std::span<const S>(terms.data(), terms.size()));
  }
  return ll;
}

double GmmModel::log_joint(std::span<const double> x, const Nuisance& z) const {
  return joint_impl(x, z);
}

Dual GmmModel::log_joint(std::span<const Dual> x, const Nuisance& z) const {
  return joint_impl(x, z);
}

double GmmModel::marginal_log_density(std::span<const double> x) const {
  return marginal_impl(x);
}

Dual GmmModel::marginal_log_density(std::span<const Dual> x) const {
  return marginal_impl(x);
}

void GmmModel::begin_sweep(std::span<const double> x) const {
  mu_cache_.resize(n_components_);
  sigma_cache_.resize(n_components_);
  for (int j = 0; j < n_components_; ++j) {
    mu_cache_[j] = x[2 * j];
    sigma_cache_[j] = std::exp(x[2 * j + 1]);
  }
}

void GmmModel::site_conditional(int site, std::span<const double>,
                                const Nuisance&,
                                std::span<double> log_weights) const {
  double v = data_[site];
  for (int j = 0; j < n_components_; ++j) {
    log_weights[j] =
        log_weight_ + normal_logpdf(mu_cache_[j], sigma_cache_[j], v);
  }
}

double GmmModel::nuisance_log_prior(const Nuisance& z) const {
  return log_weight_ * static_cast<double>(z.size());
}

Nuisance GmmModel::sample_nuisance_prior(Rng& rng) const {
  Nuisance z(data_.size());
  for (int& zi : z) {
    zi = static_cast<int>(rng.uniform01() * n_components_);
    if (zi >= n_components_) zi = n_components_ - 1;
  }
  return z;
}

}  // namespace sdhmc

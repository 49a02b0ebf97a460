#include "sdhmc/models/hmm.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sdhmc/distributions.hpp"

namespace sdhmc {

HmmModel::HmmModel(std::vector<double> data, int n_states, double noise)
    : data_(std::move(data)),
      n_states_(n_states),
      noise_(noise),
      log_k_(std::log(static_cast<double>(n_states))) {
  if (data_.empty()) {
    throw std::invalid_argument("HmmModel: no observations");
  }
  if (n_states_ < 2) {
    throw std::invalid_argument("HmmModel: need at least two states");
  }
  if (!(noise_ > 0.0)) {
    throw std::invalid_argument("HmmModel: noise must be positive");
  }
}

std::vector<std::string> HmmModel::param_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < n_states_; ++i) {
    for (int j = 0; j < n_states_; ++j) {
      names.push_back("T" + std::to_string(i) + std::to_string(j));
    }
  }
  return names;
}

std::vector<double> HmmModel::constrained(std::span<const double> x) const {
  int k = n_states_;
  std::vector<double> out(x.size());
  for (int i = 0; i < k; ++i) {
    log_softmax(x.subspan(i * k, k), std::span<double>(out.data() + i * k, k));
    for (int j = 0; j < k; ++j) {
      out[i * k + j] = std::exp(out[i * k + j]);
    }
  }
  return out;
}

template <class S>
S HmmModel::joint_impl(std::span<const S> x, const Nuisance& z) const {
  int k = n_states_;
  S ll = 0.0;
  for (const S& xi : x) {
    ll += normal_logpdf(0.0, 10.0, xi);
  }
  std::vector<S> logt(k * k);
  for (int i = 0; i < k; ++i) {
    log_softmax(x.subspan(i * k, k), std::span<S>(logt.data() + i * k, k));
  }
  for (std::size_t t = 0; t < data_.size(); ++t) {
    ll += normal_logpdf(static_cast<double>(z[t]), noise_, data_[t]);
    if (t > 0) {
      ll += logt[z[t - 1] * k + z[t]];
    }
  }
  return ll;
}

template <class S>
S HmmModel::marginal_impl(std::span<const S> x) const {
  int k = n_states_;
  S ll = 0.0;
  for (const S& xi : x) {
    ll += normal_logpdf(0.0, 10.0, xi);
  }
  std::vector<S> logt(k * k);
  for (int i = 0; i < k; ++i) {
    log_softmax(x.subspan(i * k, k), std::span<S>(logt.data() + i * k, k));
  }
  std::vector<S> prev(k), cur(k), acc(k);
  for (std::size_t t = 0; t < data_.size(); ++t) {
    for (int j = 0; j < k; ++j) {
      double em = normal_logpdf(static_cast<double>(j), noise_, data_[t]);
      if (t == 0) {
        cur[j] = em - log_k_;
      } else {
        for (int p = 0; p < k; ++p) {
          acc[p] = prev[p] + logt[p * k + j];
        }
        cur[j] = log_sum_exp(std::span<const S>(acc.data(), acc.size())) + em;
      }
    }
    std::swap(prev, cur);
  }
  ll += log_sum_exp(std::span<const S>(prev.data(), prev.size()));
  return ll;
}

double HmmModel::log_joint(std::span<const double> x, const Nuisance& z) const {
  return joint_impl(x, z);
}

Dual HmmModel::log_joint(std::span<const Dual> x, const Nuisance& z) const {
  return joint_impl(x, z);
}

double HmmModel::marginal_log_density(std::span<const double> x) const {
  return marginal_impl(x);
}

Dual HmmModel::marginal_log_density(std::span<const Dual> x) const {
  return marginal_impl(x);
}

void HmmModel::begin_sweep(std::span<const double> x) const {
  int k = n_states_;
  logt_cache_.resize(k * k);
  for (int i = 0; i < k; ++i) {
    log_softmax(x.subspan(i * k, k),
                std::span<double>(logt_cache_.data() + i * k, k));
  }
}

void HmmModel::site_conditional(int site, std::span<const double>,
                                const Nuisance& z,
                                std::span<double> log_weights) const {
  int k = n_states_;
  int last = static_cast<int>(data_.size()) - 1;
  for (int j = 0; j < k; ++j) {
    double w = normal_logpdf(static_cast<double>(j), noise_, data_[site]);
    if (site > 0) w += logt_cache_[z[site - 1] * k + j];
    if (site < last) w += logt_cache_[j * k + z[site + 1]];
    log_weights[j] = w;
  }
}

double HmmModel::nuisance_log_prior(const Nuisance&) const { return -log_k_; }

Nuisance HmmModel::sample_nuisance_prior(Rng& rng) const {
  Nuisance z(data_.size());
  for (int& zi : z) {
    zi = static_cast<int>(rng.uniform01() * n_states_);
    if (zi >= n_states_) zi = n_states_ - 1;
  }
  return z;
}

}  // namespace sdhmc

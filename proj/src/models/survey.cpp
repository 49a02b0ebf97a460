#include "sdhmc/models/survey.hpp"

#include <cmath>
#include <stdexcept>

#include "sdhmc/distributions.hpp"

namespace sdhmc {

namespace {
const double kLogHalf = std::log(0.5);
}

SurveyModel::SurveyModel(std::vector<std::uint8_t> answers)
    : answers_(std::move(answers)) {
  if (answers_.empty()) {
    throw std::invalid_argument("SurveyModel: no observations");
  }
}

std::vector<double> SurveyModel::constrained(std::span<const double> x) const {
  return {sigmoid(x[0])};
}

template <class S>
S SurveyModel::joint_impl(std::span<const S> x, const Nuisance& z) const {
  S ll = normal_logpdf(0.0, 10.0, x[0]);
  S theta = sigmoid(x[0]);
  for (std::size_t i = 0; i < answers_.size(); ++i) {
    bool y = answers_[i] != 0;
    if (z[i] == 1) {
      ll += bernoulli_logpmf(theta, y);
    } else {
      ll += bernoulli_logpmf(S(0.5), y);
    }
  }
  return ll;
}

template <class S>
S SurveyModel::marginal_impl(std::span<const S> x) const {
  S ll = normal_logpdf(0.0, 10.0, x[0]);
  S theta = sigmoid(x[0]);
  for (std::uint8_t a : answers_) {
    bool y = a != 0;
    ll += log_add_exp(bernoulli_logpmf(theta, y) + kLogHalf,
                      bernoulli_logpmf(S(0.5), y) + kLogHalf);
  }
  return ll;
}

double SurveyModel::log_joint(std::span<const double> x,
                              const Nuisance& z) const {
  return joint_impl(x, z);
}

Dual SurveyModel::log_joint(std::span<const Dual> x, const Nuisance& z) const {
  return joint_impl(x, z);
}

double SurveyModel::marginal_log_density(std::span<const double> x) const {
  return marginal_impl(x);
}

Dual SurveyModel::marginal_log_density(std::span<const Dual> x) const {
  return marginal_impl(x);
}

void SurveyModel::begin_sweep(std::span<const double> x) const {
  theta_cache_ = sigmoid(x[0]);
}

void SurveyModel::site_conditional(int site, std::span<const double>,
                                   const Nuisance&,
                                   std::span<double> log_weights) const {
  bool y = answers_[site] != 0;
  log_weights[0] = kLogHalf + bernoulli_logpmf(0.5, y);
  log_weights[1] = kLogHalf + bernoulli_logpmf(theta_cache_, y);
}

double SurveyModel::nuisance_log_prior(const Nuisance& z) const {
  return kLogHalf * static_cast<double>(z.size());
}

Nuisance SurveyModel::sample_nuisance_prior(Rng& rng) const {
  Nuisance z(answers_.size());
  for (int& zi : z) {
    zi = rng.bernoulli(0.5) ? 1 : 0;
  }
  return z;
}

}  // namespace sdhmc

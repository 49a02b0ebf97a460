#include "sdhmc/model_zoo.hpp"

#include <stdexcept>

#include "sdhmc/distributions.hpp"

namespace sdhmc {

SurveyData generate_survey(int n, const SurveyTruth& truth, Rng& rng) {
  if (n < 1) throw std::invalid_argument("generate_survey: n must be >= 1");
  if (!(truth.theta >= 0.0 && truth.theta <= 1.0)) {
    throw std::invalid_argument("generate_survey: theta must be in [0, 1]");
  }
  SurveyData data;
  data.answers.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool heads = rng.bernoulli(truth.heads_prob);
    double p = heads ? truth.theta : 0.5;
    data.answers.push_back(rng.bernoulli(p) ? 1 : 0);
  }
  return data;
}

GmmData generate_gmm(int n, const GmmTruth& truth, Rng& rng) {
  if (n < 1) throw std::invalid_argument("generate_gmm: n must be >= 1");
  GmmData data;
  data.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool second = rng.bernoulli(truth.comp1_prob);
    double mu = second ? truth.mu1 : truth.mu0;
    double sigma = second ? truth.sigma1 : truth.sigma0;
    data.values.push_back(normal_sample(mu, sigma, rng));
  }
  return data;
}

HmmData generate_hmm(int t, int k, double noise, const HmmTruth& truth,
                     Rng& rng) {
  if (t < 1) throw std::invalid_argument("generate_hmm: t must be >= 1");
  if (k < 1) throw std::invalid_argument("generate_hmm: k must be >= 1");
  if (!(noise > 0.0)) {
    throw std::invalid_argument("generate_hmm: noise must be > 0");
  }
  if (!(truth.self_prob > 0.0 && truth.self_prob <= 1.0)) {
    throw std::invalid_argument("generate_hmm: self_prob must be in (0, 1]");
  }
  double off_prob = k > 1 ? (1.0 - truth.self_prob) / (k - 1) : 0.0;
  HmmData data;
  data.n_states = k;
  data.noise = noise;
  data.values.reserve(static_cast<std::size_t>(t));
  int state = static_cast<int>(rng.uniform01() * k);
  if (state >= k) state = k - 1;
  for (int i = 0; i < t; ++i) {
    if (i > 0) {
      double u = rng.uniform01();
      double acc = 0.0;
      int next = k - 1;
      for (int j = 0; j < k; ++j) {
        acc += j == state ? truth.self_prob : off_prob;
        if (u < acc) {
          next = j;
          break;
        }
      }
      state = next;
    }
    data.values.push_back(normal_sample(static_cast<double>(state), noise, rng));
  }
  return data;
}

}  // namespace sdhmc

#pragma once

#include "sdhmc/dataset.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

struct SurveyTruth {
  double theta = 0.67;
  double heads_prob = 0.5;
};

struct GmmTruth {
  double mu0 = -2.0;
  double sigma0 = 1.0;
  double mu1 = 2.0;
  double sigma1 = 1.0;
  double comp1_prob = 0.5;
};

struct HmmTruth {
  double self_prob = 0.8;
};

SurveyData generate_survey(int n, const SurveyTruth& truth, Rng& rng);
GmmData generate_gmm(int n, const GmmTruth& truth, Rng& rng);
HmmData generate_hmm(int t, int k, double noise, const HmmTruth& truth,
                     Rng& rng);

}  // namespace sdhmc

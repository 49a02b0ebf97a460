#pragma once

#include <string>
#include <vector>

#include "sdhmc/model.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool expected_failure = false;
  double worst = 0.0;
  std::string detail;
};

CheckResult check_enumeration(const StochasticModel& stoch,
                              const MarginalizedModel& marg, int n_points,
                              double tol, Rng& rng);

CheckResult check_unbiasedness(const StochasticModel& stoch,
                               const MarginalizedModel& marg, int n_points,
                               double tol, Rng& rng);

CheckResult check_biased_control(const StochasticModel& stoch,
                                 const MarginalizedModel& marg, int n_points,
                                 double margin, Rng& rng);

CheckResult check_gradients(const StochasticModel& stoch,
                            const MarginalizedModel& marg, int n_points,
                            double tol, Rng& rng);

// The cmd_check suite: enumeration, unbiasedness, and the biased negative
// control run on the small instances; the finite-difference gradient check
// runs on the full-size instances.
std::vector<CheckResult> run_model_checks(const StochasticModel& stoch,
                                          const MarginalizedModel& marg,
                                          const StochasticModel& small_stoch,
                                          const MarginalizedModel& small_marg,
                                          Rng& rng);

}  // namespace sdhmc

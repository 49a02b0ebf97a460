#include "sdhmc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sdhmc/enumeration.hpp"

namespace sdhmc {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Trace random_trace(const ModelInfo& model, Rng& rng) {
  Trace x(model.trace_dim());
  for (double& v : x) {
    v = rng.normal();
  }
  return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::fabs(a[j] - b[j]));
  }
  return worst;
}

}  // namespace

CheckResult check_enumeration(const StochasticModel& stoch,
                              const MarginalizedModel& marg, int n_points,
                              double tol, Rng& rng) {
  CheckResult r;
  r.name = "enumeration-consistency";
  for (int i = 0; i < n_points; ++i) {
    Trace x = random_trace(stoch, rng);
    double lhs = enumerated_marginal(stoch, x);
    double rhs = marg.marginal_log_density(x);
    r.worst = std::max(r.worst, std::fabs(lhs - rhs));
  }
  r.passed = r.worst < tol;
  r.detail = "max |enumerated - marginal| = " + fmt("%.3g", r.worst) +
             " over " + std::to_string(n_points) + " traces (tol " +
             fmt("%.0e", tol) + ")";
  return r;
}

CheckResult check_unbiasedness(const StochasticModel& stoch,
                               const MarginalizedModel& marg, int n_points,
                               double tol, Rng& rng) {
  CheckResult r;
  r.name = "estimator-unbiasedness";
  for (int i = 0; i < n_points; ++i) {
    Trace x = random_trace(stoch, rng);
    auto expected = enumerated_posterior_gradient(stoch, x);
    auto exact = marginal_grad(marg, x).second;
    r.worst = std::max(r.worst, max_abs_diff(expected, exact));
  }
  r.passed = r.worst < tol;
  r.detail = "max coordinate gap = " + fmt("%.3g", r.worst) + " over " +
             std::to_string(n_points) + " traces (tol " + fmt("%.0e", tol) +
             ")";
  return r;
}

CheckResult check_biased_control(const StochasticModel& stoch,
                                 const MarginalizedModel& marg, int n_points,
                                 double margin, Rng& rng) {
  CheckResult r;
  r.name = "biased-estimator control";
  r.expected_failure = true;
  for (int i = 0; i < n_points; ++i) {
    Trace x = random_trace(stoch, rng);
    auto expected = enumerated_prior_gradient(stoch, x);
    auto exact = marginal_grad(marg, x).second;
    r.worst = std::max(r.worst, max_abs_diff(expected, exact));
  }
  r.passed = r.worst > margin;
  r.detail = "prior-draw estimator misses by " + fmt("%.3g", r.worst) +
             " (required > " + fmt("%.0e", margin) + ")";
  return r;
}

CheckResult check_gradients(const StochasticModel& stoch,
                            const MarginalizedModel& marg, int n_points,
                            double tol, Rng& rng) {
  CheckResult r;
  r.name = "gradient-vs-finite-diff";
  const double h = 1e-5;
  std::size_t dim = stoch.trace_dim();
  for (int i = 0; i < n_points; ++i) {
    Trace x = random_trace(stoch, rng);
    Nuisance z = stoch.sample_nuisance_prior(rng);
    auto joint_ad = log_joint_grad(stoch, x, z).second;
    auto marg_ad = marginal_grad(marg, x).second;
    Trace probe = x;
    for (std::size_t j = 0; j < dim; ++j) {
      probe[j] = x[j] + h;
      double jp = stoch.log_joint(probe, z);
      double mp = marg.marginal_log_density(probe);
      probe[j] = x[j] - h;
      double jm = stoch.log_joint(probe, z);
      double mm = marg.marginal_log_density(probe);
      probe[j] = x[j];
      double jfd = (jp - jm) / (2.0 * h);
      double mfd = (mp - mm) / (2.0 * h);
      double jrel = std::fabs(joint_ad[j] - jfd) /
                    std::max({1.0, std::fabs(joint_ad[j]), std::fabs(jfd)});
      double mrel = std::fabs(marg_ad[j] - mfd) /
                    std::max({1.0, std::fabs(marg_ad[j]), std::fabs(mfd)});
      r.worst = std::max({r.worst, jrel, mrel});
    }
  }
  r.passed = r.worst < tol;
  r.detail = "max relative error = " + fmt("%.3g", r.worst) + " over " +
             std::to_string(n_points) + " (x, z) pairs (tol " +
             fmt("%.0e", tol) + ")";
  return r;
}

std::vector<CheckResult> run_model_checks(const StochasticModel& stoch,
                                          const MarginalizedModel& marg,
                                          const StochasticModel& small_stoch,
                                          const MarginalizedModel& small_marg,
                                          Rng& rng) {
  std::vector<CheckResult> out;
  out.push_back(check_enumeration(small_stoch, small_marg, 20, 1e-10, rng));
  out.push_back(check_unbiasedness(small_stoch, small_marg, 20, 1e-9, rng));
  out.push_back(check_biased_control(small_stoch, small_marg, 20, 1e-7, rng));
  out.push_back(check_gradients(stoch, marg, 100, 1e-6, rng));
  return out;
}

}  // namespace sdhmc

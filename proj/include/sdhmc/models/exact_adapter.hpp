#pragma once

#include <stdexcept>

#include "sdhmc/model.hpp"

namespace sdhmc {

// Presents a marginalized model as a stochastic one with an empty nuisance,
// so the stochastic-gradient samplers can be driven with exact gradients.
class ExactGradientAdapter final : public StochasticModel {
 public:
  explicit ExactGradientAdapter(const MarginalizedModel& inner)
      : inner_(&inner) {}

  int trace_dim() const override { return inner_->trace_dim(); }
  std::vector<std::string> param_names() const override {
    return inner_->param_names();
  }
  std::vector<double> constrained(std::span<const double> x) const override {
    return inner_->constrained(x);
  }
  void canonicalize(std::span<double> params) const override {
    inner_->canonicalize(params);
  }

  double log_joint(std::span<const double> x, const Nuisance&) const override {
    return inner_->marginal_log_density(x);
  }
  Dual log_joint(std::span<const Dual> x, const Nuisance&) const override {
    return inner_->marginal_log_density(x);
  }

  int site_count() const override { return 0; }
  int site_cardinality(int) const override { return 1; }
  void site_conditional(int, std::span<const double>, const Nuisance&,
                        std::span<double>) const override {
    throw std::logic_error("ExactGradientAdapter: no nuisance sites");
  }

  double nuisance_log_prior(const Nuisance&) const override { return 0.0; }
  Nuisance sample_nuisance_prior(Rng&) const override { return {}; }

 private:
  const MarginalizedModel* inner_;
};

}  // namespace sdhmc

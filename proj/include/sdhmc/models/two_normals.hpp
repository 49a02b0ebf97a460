#pragma once

#include "sdhmc/model.hpp"

namespace sdhmc {

// Two-component illustration: a fair coin picks N(1, 0.5) or N(-1, 0.5)
// as the density of the single trace entry. The posterior over x is the
// bimodal mixture itself.
class TwoNormalsModel final : public StochasticModel, public MarginalizedModel {
 public:
  TwoNormalsModel() = default;

  int trace_dim() const override { return 1; }
  std::vector<std::string> param_names() const override { return {"x"}; }
  std::vector<double> constrained(std::span<const double> x) const override {
    return {x[0]};
  }

  double log_joint(std::span<const double> x, const Nuisance& z) const override;
  Dual log_joint(std::span<const Dual> x, const Nuisance& z) const override;

  int site_count() const override { return 1; }
  int site_cardinality(int) const override { return 2; }
  void site_conditional(int site, std::span<const double> x, const Nuisance& z,
                        std::span<double> log_weights) const override;

  double nuisance_log_prior(const Nuisance& z) const override;
  Nuisance sample_nuisance_prior(Rng& rng) const override;

  double marginal_log_density(std::span<const double> x) const override;
  Dual marginal_log_density(std::span<const Dual> x) const override;

 private:
  template <class S>
  S joint_impl(std::span<const S> x, const Nuisance& z) const;
  template <class S>
  S marginal_impl(std::span<const S> x) const;
};

}  // namespace sdhmc

#pragma once

#include <vector>

#include "sdhmc/model.hpp"

namespace sdhmc {

// Gaussian mixture with K components and fair component weights. Trace
// layout: x[2j] = mu_j, x[2j+1] = log sigma_j. Nuisance sites are the
// per-observation component assignments.
class GmmModel final : public StochasticModel, public MarginalizedModel {
 public:
  GmmModel(std::vector<double> data, int n_components);

  int trace_dim() const override { return 2 * n_components_; }
  std::vector<std::string> param_names() const override;
  std::vector<double> constrained(std::span<const double> x) const override;
  // Reorders component (mu, sigma) pairs by ascending mu, undoing label
  // switching before draws are summarized.
  void canonicalize(std::span<double> params) const override;

  double log_joint(std::span<const double> x, const Nuisance& z) const override;
  Dual log_joint(std::span<const Dual> x, const Nuisance& z) const override;

  int site_count() const override { return static_cast<int>(data_.size()); }
  int site_cardinality(int) const override { return n_components_; }
  void site_conditional(int site, std::span<const double> x, const Nuisance& z,
                        std::span<double> log_weights) const override;
  void begin_sweep(std::span<const double> x) const override;

  double nuisance_log_prior(const Nuisance& z) const override;
  Nuisance sample_nuisance_prior(Rng& rng) const override;

  double marginal_log_density(std::span<const double> x) const override;
  Dual marginal_log_density(std::span<const Dual> x) const override;

  int n_components() const { return n_components_; }
  const std::vector<double>& data() const { return data_; }

 private:
  template <class S>
  S joint_impl(std::span<const S> x, const Nuisance& z) const;
  template <class S>
  S marginal_impl(std::span<const S> x) const;

  std::vector<double> data_;
  int n_components_;
  double log_weight_;  // log(1/K)
  mutable std::vector<double> mu_cache_;
  mutable std::vector<double> sigma_cache_;
};

}  // namespace sdhmc

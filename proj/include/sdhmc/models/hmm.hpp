#pragma once

#include <vector>

#include "sdhmc/model.hpp"

namespace sdhmc {

// Hidden Markov model with a known emission law and an inferred transition
// matrix. State j emits N(j, noise). Trace holds the K*K unconstrained
// transition entries row-major; each row maps through log_softmax. The
// hidden state sequence is the nuisance, with a uniform initial-state
// weight kept outside log_joint.
class HmmModel final : public StochasticModel, public MarginalizedModel {
 public:
  HmmModel(std::vector<double> data, int n_states, double noise);

  int trace_dim() const override { return n_states_ * n_states_; }
  std::vector<std::string> param_names() const override;
  std::vector<double> constrained(std::span<const double> x) const override;

  double log_joint(std::span<const double> x, const Nuisance& z) const override;
  Dual log_joint(std::span<const Dual> x, const Nuisance& z) const override;

  int site_count() const override { return static_cast<int>(data_.size()); }
  int site_cardinality(int) const override { return n_states_; }
  void site_conditional(int site, std::span<const double> x, const Nuisance& z,
                        std::span<double> log_weights) const override;
  void begin_sweep(std::span<const double> x) const override;

  double nuisance_log_prior(const Nuisance& z) const override;
  Nuisance sample_nuisance_prior(Rng& rng) const override;

  double marginal_log_density(std::span<const double> x) const override;
  Dual marginal_log_density(std::span<const Dual> x) const override;

  int n_states() const { return n_states_; }
  double noise() const { return noise_; }
  const std::vector<double>& data() const { return data_; }

 private:
  template <class S>
  S joint_impl(std::span<const S> x, const Nuisance& z) const;
  template <class S>
  S marginal_impl(std::span<const S> x) const;

  std::vector<double> data_;
  int n_states_;
  double noise_;
  double log_k_;
  mutable std::vector<double> logt_cache_;
};

}  // namespace sdhmc

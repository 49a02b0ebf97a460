#pragma once

#include <cstdint>
#include <vector>

#include "sdhmc/model.hpp"

namespace sdhmc {

// Randomized-response survey. Each respondent privately flips a fair coin;
// on heads they answer honestly (Bernoulli(theta)), on tails they answer a
// fair coin flip. Trace holds one entry, theta = sigmoid(x[0]); the coins
// are the nuisance sites (1 = honest answer).
class SurveyModel final : public StochasticModel, public MarginalizedModel {
 public:
  explicit SurveyModel(std::vector<std::uint8_t> answers);

  int trace_dim() const override { return 1; }
  std::vector<std::string> param_names() const override { return {"theta"}; }
  std::vector<double> constrained(std::span<const double> x) const override;

  double log_joint(std::span<const double> x, const Nuisance& z) const override;
  Dual log_joint(std::span<const Dual> x, const Nuisance& z) const override;

  int site_count() const override { return static_cast<int>(answers_.size()); }
  int site_cardinality(int) const override { return 2; }
  void site_conditional(int site, std::span<const double> x, const Nuisance& z,
                        std::span<double> log_weights) const override;
  void begin_sweep(std::span<const double> x) const override;

  double nuisance_log_prior(const Nuisance& z) const override;
  Nuisance sample_nuisance_prior(Rng& rng) const override;

  double marginal_log_density(std::span<const double> x) const override;
  Dual marginal_log_density(std::span<const Dual> x) const override;

  const std::vector<std::uint8_t>& answers() const { return answers_; }

 private:
  template <class S>
  S joint_impl(std::span<const S> x, const Nuisance& z) const;
  template <class S>
  S marginal_impl(std::span<const S> x) const;

  std::vector<std::uint8_t> answers_;
  mutable double theta_cache_ = 0.5;
};

}  // namespace sdhmc

#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdhmc/autodiff.hpp"
#include "sdhmc/rng.hpp"

namespace sdhmc {

// Unconstrained continuous trace, one entry per latent real.
using Trace = std::vector<double>;

// Discrete per-site assignment (coins, component labels, hidden states).
using Nuisance = std::vector<int>;

// Presentation-side description shared by both model forms.
class ModelInfo {
 public:
  virtual ~ModelInfo() = default;

  virtual int trace_dim() const = 0;

  // Names of the constrained parameters, in report order.
  virtual std::vector<std::string> param_names() const = 0;

  // Maps an unconstrained trace to the constrained parameters.
  virtual std::vector<double> constrained(std::span<const double> x) const = 0;

  // Per-draw relabeling for models with exchangeable components. Default is
  // a no-op.
  virtual void canonicalize(std::span<double> params) const;
};

// A program with discrete nuisance sites left explicit: the density is
// differentiable in x at fixed z, and z is resampled sitewise.
class StochasticModel : public virtual ModelInfo {
 public:
  virtual double log_joint(std::span<const double> x,
                           const Nuisance& z) const = 0;
  virtual Dual log_joint(std::span<const Dual> x, const Nuisance& z) const = 0;

  virtual int site_count() const = 0;
  virtual int site_cardinality(int site) const = 0;

  // Unnormalized log weights of one site's full conditional given the rest
  // of z. Call begin_sweep(x) first; cached transforms stay valid while x
  // is unchanged.
  virtual void site_conditional(int site, std::span<const double> x,
                                const Nuisance& z,
                                std::span<double> log_weights) const = 0;
  virtual void begin_sweep(std::span<const double> x) const;

  // log p(z|y): the nuisance weight that is not part of log_joint.
  virtual double nuisance_log_prior(const Nuisance& z) const = 0;
  virtual Nuisance sample_nuisance_prior(Rng& rng) const = 0;
};

// The same program with z summed out exactly.
class MarginalizedModel : public virtual ModelInfo {
 public:
  virtual double marginal_log_density(std::span<const double> x) const = 0;
  virtual Dual marginal_log_density(std::span<const Dual> x) const = 0;
};

// One full systematic Gibbs sweep; the exported name for Algorithm-style
// "draw z from p(z|x,y)".
Nuisance resample_nuisance(const StochasticModel& model,
                           std::span<const double> x, Nuisance z, Rng& rng);

// Value and gradient in x, at fixed z / with z summed out.
std::pair<double, std::vector<double>> log_joint_grad(
    const StochasticModel& model, std::span<const double> x,
    const Nuisance& z);
std::pair<double, std::vector<double>> marginal_grad(
    const MarginalizedModel& model, std::span<const double> x);

}  // namespace sdhmc

#include "sdhmc/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

#include "sdhmc/counters.hpp"
#include "sdhmc/nuisance.hpp"

namespace sdhmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double half_momentum_energy(std::span<const double> p) {
  double acc = 0.0;
  for (double pj : p) {
    acc += pj * pj;
  }
  return 0.5 * acc;
}

void check_dim(const ModelInfo& model, const Trace& x0) {
  if (static_cast<int>(x0.size()) != model.trace_dim()) {
    throw std::invalid_argument("sampler: x0 dimension mismatch");
  }
}

// Metropolis-corrected HMC loop shared by hmc and the composing baseline.
// grad_fn(x, g) fills g and returns the log density; before_iter(x) runs
// ahead of each iteration and returns true when the cached value/gradient
// became stale (the baseline's z sweep).
template <class GradFn, class BeforeIter>
Chain hmc_loop(const char* scheme, int dim, Trace x0,
               const SamplerConfig& config, Rng& rng, GradFn&& grad_fn,
               BeforeIter&& before_iter) {
  Chain chain;
  chain.scheme = scheme;
  chain.config = config;
  chain.draws.reserve(config.n_samples_out);

  std::vector<double> x = std::move(x0);
  std::vector<double> g(dim);
  double value = grad_fn(x, g);
  if (!std::isfinite(value)) {
    throw std::invalid_argument("sampler: log density not finite at start");
  }

  std::vector<double> p(dim), x_prop(dim), p_prop(dim), g_prop(dim);
  std::uint64_t evals0 = eval_counters().dist_evals;
  auto start = Clock::now();
  for (int s = 0; s < config.n_samples_out; ++s) {
    if (before_iter(x)) {
      value = grad_fn(x, g);
    }
    for (int j = 0; j < dim; ++j) {
      p[j] = rng.normal();
    }
    double h0 = -value + half_momentum_energy(p);
    x_prop = x;
    p_prop = p;
    g_prop = g;
    detail::LeapfrogResult result{};
    try {
      result = detail::leapfrog(grad_fn, x_prop, p_prop, g_prop,
                                config.step_size, config.steps_per_sample);
    } catch (const EvaluationError&) {
      result.finite = false;
    } catch (const std::invalid_argument&) {
      result.finite = false;  // the trajectory left the density's domain
    }
    double h1 = -result.value + half_momentum_energy(p_prop);
    if (!result.finite || !std::isfinite(h1) || std::abs(h1 - h0) > 1000.0) {
      ++chain.divergences;
    } else if (h0 - h1 >= 0.0 || std::log(rng.uniform01()) < h0 - h1) {
      x = x_prop;
      g = g_prop;
      value = result.value;
      ++chain.accepted;
    }
    chain.draws.push_back(x);
  }
  chain.wall_time_s = seconds_since(start);
  chain.dist_evals = eval_counters().dist_evals - evals0;
  return chain;
}

}  // namespace

void validate_config(const SamplerConfig& config) {
  if (config.n_samples_out < 1) {
    throw std::invalid_argument("SamplerConfig: n_samples_out must be >= 1");
  }
  if (config.steps_per_sample < 1) {
    throw std::invalid_argument("SamplerConfig: steps_per_sample must be >= 1");
  }
  if (!(config.step_size > 0.0)) {
    throw std::invalid_argument("SamplerConfig: step_size must be positive");
  }
  if (config.grad_estimate_samples < 1) {
    throw std::invalid_argument(
        "SamplerConfig: grad_estimate_samples must be >= 1");
  }
}

Chain hmc(const MarginalizedModel& model, Trace x0, const SamplerConfig& config,
          Rng& rng) {
  validate_config(config);
  check_dim(model, x0);
  auto grad_fn = [&model](std::span<const double> x, std::span<double> g) {
    auto [value, grad_x] = marginal_grad(model, x);
    std::copy(grad_x.begin(), grad_x.end(), g.begin());
    return value;
  };
  return hmc_loop("hmc-marg", model.trace_dim(), std::move(x0), config, rng,
                  grad_fn, [](const std::vector<double>&) { return false; });
}

Chain composing_mh_hmc(const StochasticModel& model, Trace x0,
                       const SamplerConfig& config, Rng& rng) {
  validate_config(config);
  check_dim(model, x0);
  Nuisance z = model.sample_nuisance_prior(rng);
  auto grad_fn = [&model, &z](std::span<const double> x, std::span<double> g) {
    auto [value, grad_x] = log_joint_grad(model, x, z);
    std::copy(grad_x.begin(), grad_x.end(), g.begin());
    return value;
  };
  auto before_iter = [&model, &z, &rng](const std::vector<double>& x) {
    mh_sweep(model, x, z, rng);
    return true;
  };
  return hmc_loop("mh-hmc", model.trace_dim(), std::move(x0), config, rng,
                  grad_fn, before_iter);
}

Chain sghmc(const StochasticModel& model, Trace x0, const SamplerConfig& config,
            Rng& rng, NuisanceKernel kernel) {
  validate_config(config);
  check_dim(model, x0);
  double eta = config.step_size * config.step_size;
  double alpha =
      config.friction < 0.0 ? 0.1 * config.step_size : config.friction;
  double noise_sd = std::sqrt(2.0 * alpha * eta);

  Chain chain;
  chain.scheme = "sghmc" + std::to_string(config.grad_estimate_samples);
  chain.config = config;
  chain.draws.reserve(config.n_samples_out);

  Nuisance z = model.sample_nuisance_prior(rng);
  if (!std::isfinite(model.log_joint(std::span<const double>(x0), z))) {
    throw std::invalid_argument("sampler: log density not finite at start");
  }

  EstimatorOptions options;
  options.n_samples = config.grad_estimate_samples;
  options.kernel = kernel;

  std::vector<double> x = std::move(x0);
  int dim = static_cast<int>(x.size());
  std::vector<double> v(dim);
  long update = 0;
  std::uint64_t evals0 = eval_counters().dist_evals;
  auto start = Clock::now();
  for (int s = 0; s < config.n_samples_out; ++s) {
    for (int j = 0; j < dim; ++j) {
      v[j] = config.step_size * rng.normal();
    }
    for (int t = 0; t < config.steps_per_sample; ++t) {
      ++update;
      GradientEstimate est;
      try {
        est = estimate_gradient(model, x, std::move(z), options, rng);
      } catch (const EvaluationError& e) {
        throw ChainAbort(std::string("sghmc: ") + e.what(), update);
      } catch (const std::invalid_argument& e) {
        throw ChainAbort(std::string("sghmc: ") + e.what(), update);
      }
      z = std::move(est.z);
      for (int j = 0; j < dim; ++j) {
        v[j] += eta * est.grad[j] - alpha * v[j] + noise_sd * rng.normal();
        x[j] += v[j];
      }
      if (!detail::all_finite(x) || !detail::all_finite(v)) {
        throw ChainAbort("sghmc: non-finite state", update);
      }
    }
    chain.draws.push_back(x);
  }
  chain.wall_time_s = seconds_since(start);
  chain.dist_evals = eval_counters().dist_evals - evals0;
  return chain;
}

Trace random_init(int dim, Rng& rng) {
  Trace x(dim);
  for (double& xi : x) {
    xi = rng.normal();
  }
  return x;
}

}  // namespace sdhmc

#include "sdhmc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sdhmc {

namespace {

struct SchemeSpec {
  std::string token;
  int grad_samples = 0;  // 0 for corrected schemes
};

SchemeSpec parse_scheme(const std::string& token) {
  if (token == "mh-hmc" || token == "hmc-marg") {
    return {token, 0};
  }
  if (token.rfind("sghmc", 0) == 0 && token.size() > 5) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(token.substr(5), &used);
      if (used != token.size() - 5) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1) return {token, n};
  }
  throw std::invalid_argument("unknown scheme: " + token +
                              " (expected sghmc<N>, mh-hmc, or hmc-marg)");
}

Chain run_one(const ModelFactory& factory, const SchemeSpec& spec,
              SamplerConfig config, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  if (spec.token == "hmc-marg") {
    auto model = factory.marginalized();
    Trace x0 = random_init(model->trace_dim(), rng);
    return hmc(*model, x0, config, rng);
  }
  auto model = factory.stochastic();
  Trace x0 = random_init(model->trace_dim(), rng);
  if (spec.token == "mh-hmc") {
    return composing_mh_hmc(*model, x0, config, rng);
  }
  config.grad_estimate_samples = spec.grad_samples;
  return sghmc(*model, x0, config, rng);
}

// Dry run of one stochastic-gradient scheme at a candidate step size, at the
// full chain length requested for the benchmark. Returns false when the chain
// aborts, which is how the uncorrected update signals that the step is
// outside its stability region for this model.
bool sghmc_survives(const ModelFactory& factory, int grad_samples,
                    SamplerConfig config, std::uint64_t seed,
                    std::uint64_t stream) {
  config.grad_estimate_samples = grad_samples;
  Rng rng(seed, stream);
  auto model = factory.stochastic();
  Trace x0 = random_init(model->trace_dim(), rng);
  try {
    sghmc(*model, x0, config, rng);
  } catch (const ChainAbort&) {
    return false;
  }
  return true;
}

double min_coordinate_ess(const ModelInfo& model, const Chain& chain) {
  std::size_t n = chain.draws.size();
  std::size_t start = n / 10;
  std::size_t keep = n - start;
  std::size_t dim = model.param_names().size();
  std::vector<std::vector<double>> cols(dim, std::vector<double>(keep));
  for (std::size_t i = 0; i < keep; ++i) {
    auto params = model.constrained(chain.draws[start + i]);
    model.canonicalize(params);
    for (std::size_t j = 0; j < dim; ++j) {
      cols[j][i] = params[j];
    }
  }
  double ess = static_cast<double>(keep);
  for (std::size_t j = 0; j < dim; ++j) {
    ess = std::min(ess, effective_sample_size(cols[j]).value);
  }
  return ess;
}

}  // namespace

std::vector<double> default_tune_grid() {
  return {0.001, 0.003, 0.01, 0.03, 0.1, 0.3};
}

TuneResult tune_step_size(const ModelFactory& factory,
                          const std::vector<double>& grid,
                          SamplerConfig config, std::uint64_t seed) {
  if (!factory.marginalized) {
    throw std::invalid_argument("tune_step_size: model has no marginalized form");
  }
  if (grid.empty()) {
    throw std::invalid_argument("tune_step_size: step grid is empty");
  }
  for (double s : grid) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("tune_step_size: steps must be > 0");
    }
  }
  TuneResult result;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    config.step_size = grid[i];
    TuneEntry entry;
    entry.step = grid[i];
    auto model = factory.marginalized();
    Rng rng(seed, 0xFFFF0000ull + i);
    Trace x0 = random_init(model->trace_dim(), rng);
    try {
      Chain chain = hmc(*model, x0, config, rng);
      entry.ess = min_coordinate_ess(*model, chain);
      entry.divergences = chain.divergences;
    } catch (const std::invalid_argument&) {
      entry.ess = 0.0;
      entry.divergences = config.n_samples_out;
    }
    result.grid.push_back(entry);
  }
  const TuneEntry* best = &result.grid.front();
  for (const TuneEntry& e : result.grid) {
    if (e.divergences < best->divergences ||
        (e.divergences == best->divergences && e.ess > best->ess)) {
      best = &e;
    }
  }
  result.chosen = best->step;
  return result;
}

BenchRun run_benchmark(const ModelFactory& factory, const BenchOptions& options) {
  if (options.replicas < 1) {
    throw std::invalid_argument("run_benchmark: replicas must be >= 1");
  }
  std::vector<std::string> tokens = options.schemes;
  if (tokens.empty()) {
    tokens = {"sghmc1", "sghmc10", "mh-hmc", "hmc-marg"};
    if (!factory.marginalized) tokens.pop_back();
  }
  std::vector<SchemeSpec> specs;
  for (const std::string& t : tokens) {
    specs.push_back(parse_scheme(t));
    if (specs.back().token == "hmc-marg" && !factory.marginalized) {
      throw std::invalid_argument("run_benchmark: model has no marginalized form");
    }
  }

  BenchRun run;
  SamplerConfig config = options.config;
  if (config.step_size <= 0.0) {
    SamplerConfig tune_cfg = config;
    tune_cfg.n_samples_out = options.tune_samples;
    tune_cfg.step_size = 1.0;  // placeholder, overwritten per grid entry
    run.tuning = tune_step_size(factory, options.tune_grid, tune_cfg,
                                config.seed);
    run.tuned = true;
    run.grid_choice = run.tuning.chosen;
    config.step_size = run.tuning.chosen;

    // The grid is ranked on the corrected marginalized sampler, which
    // tolerates larger steps than the uncorrected update. Before committing
    // every scheme to the chosen step, dry-run each selected
    // stochastic-gradient scheme and walk down the ranking until all of
    // them survive.
    std::vector<int> probe_grad_samples;
    for (const SchemeSpec& spec : specs) {
      if (spec.grad_samples >= 1) probe_grad_samples.push_back(spec.grad_samples);
    }
    if (!probe_grad_samples.empty()) {
      std::vector<TuneEntry> ranked = run.tuning.grid;
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const TuneEntry& a, const TuneEntry& b) {
                         if (a.divergences != b.divergences)
                           return a.divergences < b.divergences;
                         return a.ess > b.ess;
                       });
      for (std::size_t k = 0; k < ranked.size(); ++k) {
        SamplerConfig probe_cfg = config;
        probe_cfg.step_size = ranked[k].step;
        bool ok = true;
        for (std::size_t p = 0; p < probe_grad_samples.size(); ++p) {
          std::uint64_t stream = 0xFFFE0000ull + k * 64 + p;
          if (!sghmc_survives(factory, probe_grad_samples[p], probe_cfg,
                              config.seed, stream)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          config.step_size = ranked[k].step;
          break;
        }
      }
      run.stability_fallback = config.step_size != run.grid_choice;
    }
  }
  run.step_size = config.step_size;
  validate_config(config);

  run.schemes.resize(specs.size());
  struct Item {
    std::size_t scheme = 0;
    int replica = 0;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    run.schemes[s].scheme = specs[s].token;
    run.schemes[s].chains.resize(static_cast<std::size_t>(options.replicas));
    for (int r = 0; r < options.replicas; ++r) {
      items.push_back({s, r});
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) break;
      }
      const Item& item = items[i];
      std::uint64_t stream =
          (static_cast<std::uint64_t>(item.scheme) + 1) * 65536ull +
          static_cast<std::uint64_t>(item.replica);
      try {
        run.schemes[item.scheme].chains[static_cast<std::size_t>(item.replica)] =
            run_one(factory, specs[item.scheme], config, config.seed, stream);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  int jobs = std::clamp<int>(options.jobs, 1, static_cast<int>(items.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return run;
}

BenchReport report_from_run(const ModelFactory& factory, const BenchRun& run) {
  BenchReport report;
  report.model = factory.name;
  auto model = factory.stochastic();
  for (const SchemeChains& sc : run.schemes) {
    report.schemes.push_back(summarize(*model, sc.chains));
  }
  if (run.tuned) {
    char buf[128];
    if (run.stability_fallback) {
      std::snprintf(buf, sizeof(buf),
                    "grid search chose step size %.10g; stochastic-gradient"
                    " dry run aborted there, so all schemes use %.10g",
                    run.grid_choice, run.step_size);
    } else {
      std::snprintf(buf, sizeof(buf),
                    "step size %.10g chosen by grid search on the marginalized"
                    " form", run.step_size);
    }
    report.notes.push_back(buf);
  }
  return report;
}

}  // namespace sdhmc

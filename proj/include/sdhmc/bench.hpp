#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sdhmc/diagnostics.hpp"
#include "sdhmc/samplers.hpp"

namespace sdhmc {

struct ModelFactory {
  std::string name;
  std::function<std::unique_ptr<StochasticModel>()> stochastic;
  std::function<std::unique_ptr<MarginalizedModel>()> marginalized;
};

struct TuneEntry {
  double step = 0.0;
  double ess = 0.0;
  long divergences = 0;
};

struct TuneResult {
  std::vector<TuneEntry> grid;
  double chosen = 0.0;
};

std::vector<double> default_tune_grid();

TuneResult tune_step_size(const ModelFactory& factory,
                          const std::vector<double>& grid,
                          SamplerConfig config, std::uint64_t seed);

struct BenchOptions {
  int replicas = 10;
  SamplerConfig config;
  std::vector<double> tune_grid = default_tune_grid();
  int tune_samples = 2000;
  int jobs = 1;
  std::vector<std::string> schemes;
};

struct SchemeChains {
  std::string scheme;
  std::vector<Chain> chains;
};

struct BenchRun {
  double step_size = 0.0;
  bool tuned = false;
  bool stability_fallback = false;
  double grid_choice = 0.0;
  TuneResult tuning;
  std::vector<SchemeChains> schemes;
};

BenchRun run_benchmark(const ModelFactory& factory, const BenchOptions& options);

BenchReport report_from_run(const ModelFactory& factory, const BenchRun& run);

}  // namespace sdhmc

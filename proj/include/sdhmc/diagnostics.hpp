#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdhmc/model.hpp"
#include "sdhmc/samplers.hpp"

namespace sdhmc {

struct EssEstimate {
  double value = 0.0;
  bool degenerate = false;  // constant input; value was clamped to n
};

// ESS = n / (1 + 2 sum of autocorrelations), truncated by Geyer's
// initial-positive-sequence rule and clamped into (0, n].
EssEstimate effective_sample_size(std::span<const double> draws);

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double mcse = 0.0;  // from the spread of per-replica means
};

struct SchemeSummary {
  std::string scheme;
  int replicas = 0;
  int kept_draws = 0;  // per replica, after burn-in
  double ess_mean = 0.0;
  double ess_sd = 0.0;
  double wall_mean = 0.0;
  double wall_sd = 0.0;
  double ess_per_second = 0.0;
  double accept_rate = 0.0;  // over all proposals; 0 for sghmc
  long divergences = 0;
  double dist_evals_mean = 0.0;  // per replica
  std::vector<ParamSummary> params;
};

// Pools replicas of one scheme: min-coordinate ESS per replica in the
// constrained space, means/sds across replicas, posterior summaries over
// all kept draws. Drops the first burn_in fraction of each chain.
SchemeSummary summarize(const ModelInfo& model,
                        const std::vector<Chain>& replicas,
                        double burn_in = 0.1);

struct BenchReport {
  std::string model;
  std::vector<SchemeSummary> schemes;  // display order
  std::vector<std::string> notes;
};

void write_report_csv(std::ostream& out, const BenchReport& report);
std::string format_report_table(const BenchReport& report);

void write_chain_csv(std::ostream& out, const ModelInfo& model,
                     const Chain& chain);

}  // namespace sdhmc

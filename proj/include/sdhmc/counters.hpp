#pragma once

#include <cstdint>

namespace sdhmc {

// Thread-local tallies used for hardware-independent cost comparisons.
struct EvalCounters {
  std::uint64_t dist_evals = 0;  // distribution log-density evaluations
  std::uint64_t lse_terms = 0;   // terms reduced by log_sum_exp / log_add_exp
  void reset() {
    dist_evals = 0;
    lse_terms = 0;
  }
};

EvalCounters& eval_counters();

}  // namespace sdhmc

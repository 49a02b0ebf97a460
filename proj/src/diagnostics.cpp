#include "sdhmc/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sdhmc {

namespace {

double sample_sd(std::span<const double> v) {
  std::size_t n = v.size();
  if (n < 2) return 0.0;
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double acc = 0.0;
  for (double e : v) {
    acc += (e - mean) * (e - mean);
  }
  return std::sqrt(acc / (n - 1));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string display_name(const std::string& scheme) {
  if (scheme.rfind("sghmc", 0) == 0) return "sgHMC-" + scheme.substr(5);
  if (scheme == "mh-hmc") return "MH+HMC";
  if (scheme == "hmc-marg") return "HMC-marginalized";
  return scheme;
}

bool is_corrected(const std::string& scheme) {
  return scheme.rfind("sghmc", 0) != 0;
}

}  // namespace

EssEstimate effective_sample_size(std::span<const double> draws) {
  std::size_t n = draws.size();
  if (n < 100) {
    throw std::invalid_argument("effective_sample_size: need >= 100 draws");
  }
  double mean = std::accumulate(draws.begin(), draws.end(), 0.0) /
                static_cast<double>(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = draws[i] - mean;
  }
  auto gamma = [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      acc += d[i] * d[i + k];
    }
    return acc / static_cast<double>(n);
  };
  double g0 = gamma(0);
  if (g0 <= 0.0) {
    return {static_cast<double>(n), true};
  }
  // Sum autocovariances in consecutive-lag pairs while the pair sums stay
  // positive (the asymptotic variance of a reversible chain).
  double sigma2 = -g0;
  for (std::size_t t = 0; 2 * t + 1 < n; ++t) {
    double pair = gamma(2 * t) + gamma(2 * t + 1);
    if (pair <= 0.0) break;
    sigma2 += 2.0 * pair;
  }
  double ess = static_cast<double>(n) * g0 / sigma2;
  if (!(sigma2 > 0.0) || !(ess > 0.0) || ess > static_cast<double>(n)) {
    return {static_cast<double>(n), false};
  }
  return {ess, false};
}

SchemeSummary summarize(const ModelInfo& model,
                        const std::vector<Chain>& replicas, double burn_in) {
  if (replicas.size() < 2) {
    throw std::invalid_argument("summarize: need at least 2 replicas");
  }
  std::size_t n = replicas.front().draws.size();
  for (const Chain& c : replicas) {
    if (c.draws.size() != n || c.scheme != replicas.front().scheme) {
      throw std::invalid_argument("summarize: replicas do not match");
    }
  }
  std::size_t start = static_cast<std::size_t>(burn_in * static_cast<double>(n));
  std::size_t keep = n - start;
  auto names = model.param_names();
  std::size_t n_params = names.size();
  std::size_t n_reps = replicas.size();

  SchemeSummary out;
  out.scheme = replicas.front().scheme;
  out.replicas = static_cast<int>(n_reps);
  out.kept_draws = static_cast<int>(keep);

  std::vector<double> ess_per_rep(n_reps), wall_per_rep(n_reps);
  std::vector<double> evals_per_rep(n_reps);
  std::vector<std::vector<double>> rep_means(n_params,
                                             std::vector<double>(n_reps));
  std::vector<double> pooled_mean(n_params, 0.0), pooled_m2(n_params, 0.0);
  std::size_t pooled_count = 0;
  long accepted = 0;

  for (std::size_t r = 0; r < n_reps; ++r) {
    const Chain& chain = replicas[r];
    std::vector<std::vector<double>> cols(n_params,
                                          std::vector<double>(keep));
    for (std::size_t i = 0; i < keep; ++i) {
      auto params = model.constrained(chain.draws[start + i]);
      model.canonicalize(params);
      for (std::size_t j = 0; j < n_params; ++j) {
        cols[j][i] = params[j];
      }
    }
    double min_ess = static_cast<double>(keep);
    for (std::size_t j = 0; j < n_params; ++j) {
      min_ess = std::min(min_ess, effective_sample_size(cols[j]).value);
      double rep_mean =
          std::accumulate(cols[j].begin(), cols[j].end(), 0.0) /
          static_cast<double>(keep);
      rep_means[j][r] = rep_mean;
      for (double v : cols[j]) {
        pooled_mean[j] += v;
        pooled_m2[j] += v * v;
      }
    }
    pooled_count += keep;
    ess_per_rep[r] = min_ess;
    wall_per_rep[r] = chain.wall_time_s;
    evals_per_rep[r] = static_cast<double>(chain.dist_evals);
    accepted += chain.accepted;
    out.divergences += chain.divergences;
  }

  out.ess_mean = std::accumulate(ess_per_rep.begin(), ess_per_rep.end(), 0.0) /
                 static_cast<double>(n_reps);
  out.ess_sd = sample_sd(ess_per_rep);
  out.wall_mean =
      std::accumulate(wall_per_rep.begin(), wall_per_rep.end(), 0.0) /
      static_cast<double>(n_reps);
  out.wall_sd = sample_sd(wall_per_rep);
  out.ess_per_second = out.wall_mean > 0.0 ? out.ess_mean / out.wall_mean : 0.0;
  out.accept_rate = static_cast<double>(accepted) /
                    (static_cast<double>(n_reps) * static_cast<double>(n));
  out.dist_evals_mean =
      std::accumulate(evals_per_rep.begin(), evals_per_rep.end(), 0.0) /
      static_cast<double>(n_reps);

  out.params.resize(n_params);
  for (std::size_t j = 0; j < n_params; ++j) {
    double m = pooled_mean[j] / static_cast<double>(pooled_count);
    double var =
        (pooled_m2[j] - static_cast<double>(pooled_count) * m * m) /
        static_cast<double>(pooled_count - 1);
    out.params[j].name = names[j];
    out.params[j].mean = m;
    out.params[j].sd = var > 0.0 ? std::sqrt(var) : 0.0;
    out.params[j].mcse =
        sample_sd(rep_means[j]) / std::sqrt(static_cast<double>(n_reps));
  }
  return out;
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "model,scheme,kind,name,mean,sd,extra\n";
  for (const SchemeSummary& s : report.schemes) {
    auto row = [&](const std::string& kind, const std::string& name,
                   const std::string& mean, const std::string& sd,
                   const std::string& extra) {
      out << report.model << ',' << s.scheme << ',' << kind << ',' << name
          << ',' << mean << ',' << sd << ',' << extra << '\n';
    };
    row("ess", "min_coordinate", fmt("%.10g", s.ess_mean),
        fmt("%.10g", s.ess_sd), "");
    row("wall_seconds", "chain", fmt("%.10g", s.wall_mean),
        fmt("%.10g", s.wall_sd), "machine_dependent");
    row("ess_per_second", "", fmt("%.10g", s.ess_per_second), "", "");
    row("accept_rate", "", fmt("%.10g", s.accept_rate), "",
        is_corrected(s.scheme) ? "" : "no_correction");
    row("divergences", "", std::to_string(s.divergences), "", "");
    row("dist_evals", "per_replica", fmt("%.10g", s.dist_evals_mean), "", "");
    for (const ParamSummary& p : s.params) {
      row("param", p.name, fmt("%.10g", p.mean), fmt("%.10g", p.sd),
          fmt("%.10g", p.mcse));
    }
  }
}

std::string format_report_table(const BenchReport& report) {
  std::string out;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  const std::size_t label_w = 19;
  const std::size_t col_w = 28;

  out += "model: " + report.model + "\n";
  if (!report.schemes.empty()) {
    const SchemeSummary& first = report.schemes.front();
    out += "replicas: " + std::to_string(first.replicas) +
           ", kept draws per chain: " + std::to_string(first.kept_draws) +
           " (after 10% burn-in), ESS: min over constrained coordinates\n";
  }
  out += "\n";
  out += pad("metric", label_w);
  for (const SchemeSummary& s : report.schemes) {
    out += pad(display_name(s.scheme), col_w);
  }
  out += "\n";

  auto metric_row = [&](const std::string& label, auto value_of) {
    out += pad(label, label_w);
    for (const SchemeSummary& s : report.schemes) {
      out += pad(value_of(s), col_w);
    }
    out += "\n";
  };
  metric_row("ESS", [&](const SchemeSummary& s) {
    return fmt("%.1f", s.ess_mean) + " +- " + fmt("%.1f", s.ess_sd);
  });
  metric_row("wall time, s", [&](const SchemeSummary& s) {
    return fmt("%.3f", s.wall_mean) + " +- " + fmt("%.3f", s.wall_sd);
  });
  metric_row("ESS per second", [&](const SchemeSummary& s) {
    return fmt("%.1f", s.ess_per_second);
  });
  metric_row("acceptance rate", [&](const SchemeSummary& s) {
    return is_corrected(s.scheme) ? fmt("%.3f", s.accept_rate)
                                  : std::string("-");
  });
  metric_row("divergences", [&](const SchemeSummary& s) {
    return std::to_string(s.divergences);
  });
  metric_row("dist evals (1e6)", [&](const SchemeSummary& s) {
    return fmt("%.2f", s.dist_evals_mean / 1e6);
  });

  out += "\nposterior (mean +- sd [mcse]):\n";
  if (!report.schemes.empty()) {
    std::size_t n_params = report.schemes.front().params.size();
    for (std::size_t j = 0; j < n_params; ++j) {
      out += pad("  " + report.schemes.front().params[j].name, label_w);
      for (const SchemeSummary& s : report.schemes) {
        const ParamSummary& p = s.params[j];
        out += pad(fmt("%.4f", p.mean) + " +- " + fmt("%.4f", p.sd) + " [" +
                       fmt("%.4f", p.mcse) + "]",
                   col_w);
      }
      out += "\n";
    }
  }

  const SchemeSummary* base = nullptr;
  for (const SchemeSummary& s : report.schemes) {
    if (s.scheme == "sghmc1") base = &s;
  }
  if (base != nullptr && base->dist_evals_mean > 0.0) {
    out += "\nevaluation-count ratio vs sgHMC-1:";
    bool first_entry = true;
    for (const SchemeSummary& s : report.schemes) {
      if (&s == base) continue;
      out += first_entry ? " " : ", ";
      first_entry = false;
      out += display_name(s.scheme) + " " +
             fmt("%.2f", s.dist_evals_mean / base->dist_evals_mean) + "x";
    }
    out += "\n";
  }
  out += "wall-time values are machine-dependent; evaluation counts are the "
         "portable cost proxy\n";
  for (const std::string& note : report.notes) {
    out += note + "\n";
  }
  return out;
}

void write_chain_csv(std::ostream& out, const ModelInfo& model,
                     const Chain& chain) {
  auto names = model.param_names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    out << (j == 0 ? "" : ",") << names[j];
  }
  out << '\n';
  char buf[64];
  for (const Trace& draw : chain.draws) {
    auto params = model.constrained(draw);
    for (std::size_t j = 0; j < params.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", params[j]);
      out << (j == 0 ? "" : ",") << buf;
    }
    out << '\n';
  }
}

}  // namespace sdhmc

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdhmc/bench.hpp"
#include "sdhmc/checks.hpp"
#include "sdhmc/dataset.hpp"
#include "sdhmc/model_zoo.hpp"
#include "sdhmc/models/gmm.hpp"
#include "sdhmc/models/hmm.hpp"
#include "sdhmc/models/survey.hpp"
#include "sdhmc/models/two_normals.hpp"

namespace {

using namespace sdhmc;

constexpr int kGmmComponents = 2;

std::string default_data_path(const std::string& model) {
  return "data/" + model + ".txt";
}

ModelFactory make_factory(const std::string& model,
                          const std::string& data_path) {
  ModelFactory f;
  f.name = model;
  if (model == "survey") {
    auto data = std::make_shared<SurveyData>(load_survey_file(data_path));
    f.stochastic = [data] {
      return std::make_unique<SurveyModel>(data->answers);
    };
    f.marginalized = [data] {
      return std::make_unique<SurveyModel>(data->answers);
    };
  } else if (model == "gmm") {
    auto data = std::make_shared<GmmData>(load_gmm_file(data_path));
    f.stochastic = [data] {
      return std::make_unique<GmmModel>(data->values, kGmmComponents);
    };
    f.marginalized = [data] {
      return std::make_unique<GmmModel>(data->values, kGmmComponents);
    };
  } else if (model == "hmm") {
    auto data = std::make_shared<HmmData>(load_hmm_file(data_path));
    f.stochastic = [data] {
      return std::make_unique<HmmModel>(data->values, data->n_states,
                                        data->noise);
    };
    f.marginalized = [data] {
      return std::make_unique<HmmModel>(data->values, data->n_states,
                                        data->noise);
    };
  } else if (model == "twonormals") {
    f.stochastic = [] { return std::make_unique<TwoNormalsModel>(); };
    f.marginalized = [] { return std::make_unique<TwoNormalsModel>(); };
  } else {
    throw std::invalid_argument(
        "unknown model: " + model +
        " (expected survey, gmm, hmm, or twonormals)");
  }
  return f;
}

// Enumeration-based checks need instances small enough to sum over every
// nuisance assignment; take a prefix of the dataset.
ModelFactory make_small_factory(const std::string& model,
                                const std::string& data_path) {
  ModelFactory f;
  f.name = model;
  if (model == "survey") {
    auto data = std::make_shared<SurveyData>(load_survey_file(data_path));
    if (data->answers.size() > 8) data->answers.resize(8);
    f.stochastic = [data] {
      return std::make_unique<SurveyModel>(data->answers);
    };
    f.marginalized = [data] {
      return std::make_unique<SurveyModel>(data->answers);
    };
  } else if (model == "gmm") {
    auto data = std::make_shared<GmmData>(load_gmm_file(data_path));
    if (data->values.size() > 6) data->values.resize(6);
    f.stochastic = [data] {
      return std::make_unique<GmmModel>(data->values, kGmmComponents);
    };
    f.marginalized = [data] {
      return std::make_unique<GmmModel>(data->values, kGmmComponents);
    };
  } else if (model == "hmm") {
    auto data = std::make_shared<HmmData>(load_hmm_file(data_path));
    if (data->values.size() > 4) data->values.resize(4);
    f.stochastic = [data] {
      return std::make_unique<HmmModel>(data->values, data->n_states,
                                        data->noise);
    };
    f.marginalized = [data] {
      return std::make_unique<HmmModel>(data->values, data->n_states,
                                        data->noise);
    };
  } else {
    return make_factory(model, data_path);
  }
  return f;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

struct CommonArgs {
  std::string model;
  std::string data;
  std::string out = ".";
  std::uint64_t seed = 0;
  int replicas = 10;
  int samples = 10000;
  int steps = 10;
  double step_size = 0.0;
  double friction = -1.0;
  int grad_samples = 0;
  int jobs = 1;
  std::vector<std::string> schemes;
};

void add_sampler_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "base RNG seed");
  cmd->add_option("--samples", args.samples, "output draws per chain");
  cmd->add_option("--steps", args.steps, "integrator updates per draw");
  cmd->add_option("--step-size", args.step_size,
                  "integrator step size (0 = tune on a grid first)");
  cmd->add_option("--friction", args.friction,
                  "uncorrected-sampler friction (negative = 0.1 * step size)");
}

SamplerConfig config_from(const CommonArgs& args) {
  SamplerConfig config;
  config.n_samples_out = args.samples;
  config.steps_per_sample = args.steps;
  config.step_size = args.step_size;
  config.friction = args.friction;
  config.seed = args.seed;
  return config;
}

int cmd_generate(const CommonArgs& args, int n, double theta, int t, int k,
                 double noise) {
  Rng rng(args.seed, 0);
  std::string out_path =
      args.out != "." ? args.out : default_data_path(args.model);
  std::filesystem::path parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(out_path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + out_path);
  }
  std::size_t records = 0;
  if (args.model == "survey") {
    SurveyTruth truth;
    truth.theta = theta;
    SurveyData data = generate_survey(n, truth, rng);
    save_survey(out, data,
                {"survey dataset: n=" + std::to_string(n) +
                 " theta=" + fmt("%g", truth.theta) +
                 " heads_prob=" + fmt("%g", truth.heads_prob) +
                 " seed=" + std::to_string(args.seed)});
    records = data.answers.size();
  } else if (args.model == "gmm") {
    GmmTruth truth;
    GmmData data = generate_gmm(n, truth, rng);
    save_gmm(out, data,
             {"gmm dataset: n=" + std::to_string(n) + " mu0=" +
              fmt("%g", truth.mu0) + " sigma0=" + fmt("%g", truth.sigma0) +
              " mu1=" + fmt("%g", truth.mu1) + " sigma1=" +
              fmt("%g", truth.sigma1) + " comp1_prob=" +
              fmt("%g", truth.comp1_prob) + " seed=" +
              std::to_string(args.seed)});
    records = data.values.size();
  } else if (args.model == "hmm") {
    HmmTruth truth;
    HmmData data = generate_hmm(t, k, noise, truth, rng);
    save_hmm(out, data,
             {"hmm dataset: t=" + std::to_string(t) + " k=" +
              std::to_string(k) + " noise=" + fmt("%g", noise) +
              " self_prob=" + fmt("%g", truth.self_prob) + " seed=" +
              std::to_string(args.seed)});
    records = data.values.size();
  } else {
    throw std::invalid_argument("generate supports survey, gmm, and hmm only");
  }
  std::cout << "wrote " << out_path << " (" << records << " records)\n";
  return 0;
}

int cmd_tune(const CommonArgs& args, const std::vector<double>& grid) {
  ModelFactory factory = make_factory(args.model, args.data);
  SamplerConfig config = config_from(args);
  config.step_size = 1.0;  // overwritten per grid entry
  TuneResult result = tune_step_size(factory, grid, config, args.seed);
  std::cout << "step        ESS(min-coord)  divergences\n";
  for (const TuneEntry& e : result.grid) {
    std::printf("%-12g%-16.1f%ld\n", e.step, e.ess, e.divergences);
  }
  std::cout << "chosen step size: " << fmt("%g", result.chosen) << "\n";
  return 0;
}

int cmd_bench(const CommonArgs& args, const std::vector<double>& grid) {
  ModelFactory factory = make_factory(args.model, args.data);
  BenchOptions options;
  options.replicas = args.replicas;
  options.config = config_from(args);
  options.tune_grid = grid;
  options.jobs = args.jobs;
  options.schemes = args.schemes;
  if (options.schemes.empty() && args.model == "twonormals") {
    options.schemes = {"sghmc1", "sghmc10", "mh-hmc"};
  }
  if (args.grad_samples > 0) {
    std::vector<std::string> tokens = options.schemes;
    if (tokens.empty()) {
      tokens = {"sghmc1", "sghmc10", "mh-hmc", "hmc-marg"};
    }
    int hits = 0;
    for (std::string& tok : tokens) {
      if (tok.rfind("sghmc", 0) == 0) {
        tok = "sghmc" + std::to_string(args.grad_samples);
        ++hits;
      }
    }
    if (hits != 1) {
      throw std::invalid_argument(
          "--grad-samples requires selecting exactly one sghmc scheme via "
          "--scheme");
    }
    options.schemes = tokens;
  }

  BenchRun run = run_benchmark(factory, options);
  BenchReport report = report_from_run(factory, run);

  std::filesystem::create_directories(args.out);
  std::filesystem::path dir(args.out);
  for (const SchemeChains& sc : run.schemes) {
    auto model = factory.stochastic();
    for (std::size_t i = 0; i < sc.chains.size(); ++i) {
      std::filesystem::path p =
          dir / (args.model + "_" + sc.scheme + "_chain" + std::to_string(i) +
                 ".csv");
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot open " + p.string());
      write_chain_csv(out, *model, sc.chains[i]);
    }
  }
  {
    std::filesystem::path p = dir / (args.model + "_report.csv");
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open " + p.string());
    write_report_csv(out, report);
  }
  std::string table = format_report_table(report);
  {
    std::filesystem::path p = dir / (args.model + "_table.txt");
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open " + p.string());
    out << table;
  }
  std::cout << table;
  return 0;
}

int cmd_check(const CommonArgs& args) {
  ModelFactory factory = make_factory(args.model, args.data);
  ModelFactory small = make_small_factory(args.model, args.data);
  auto stoch = factory.stochastic();
  auto marg = factory.marginalized();
  auto small_stoch = small.stochastic();
  auto small_marg = small.marginalized();
  Rng rng(args.seed, 0xC0FFEEull);
  auto results =
      run_model_checks(*stoch, *marg, *small_stoch, *small_marg, rng);
  bool all_ok = true;
  std::cout << args.model << " checks:\n";
  for (const CheckResult& r : results) {
    std::string status;
    if (r.expected_failure) {
      status = r.passed ? "FAIL (deliberate)" : "PASS (unexpected: control "
                                                "did not misbehave)";
    } else {
      status = r.passed ? "PASS" : "FAIL";
    }
    all_ok = all_ok && r.passed;
    std::printf("  %-26s %-20s %s\n", r.name.c_str(), status.c_str(),
                r.detail.c_str());
  }
  std::cout << "result: " << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for gradient-based samplers on models with "
               "discrete nuisance variables"};
  app.set_config("--config", "", "read options from a key=value file");
  app.require_subcommand(1);

  CommonArgs args;
  int gen_n = 0;
  double gen_theta = 0.67;
  int gen_t = 16;
  int gen_k = 3;
  double gen_noise = 0.5;
  std::vector<double> grid = default_tune_grid();

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--model", args.model,
                    "model name: survey, gmm, hmm, twonormals")
        ->required();
  };
  auto add_data = [&](CLI::App* cmd) {
    cmd->add_option("--data", args.data,
                    "dataset file (default data/<model>.txt)");
  };

  CLI::App* gen = app.add_subcommand(
      "generate", "write a synthetic dataset with a seeded generator");
  add_model(gen);
  gen->add_option("--n", gen_n, "observation count (survey default 60, gmm "
                                "default 100)");
  gen->add_option("--theta", gen_theta, "survey ground-truth rate");
  gen->add_option("--t", gen_t, "hmm sequence length");
  gen->add_option("--k", gen_k, "hmm state count");
  gen->add_option("--noise", gen_noise, "hmm emission sd");
  gen->add_option("--seed", args.seed, "generator seed");
  gen->add_option("--out", args.out, "output path (default data/<model>.txt)");

  CLI::App* tune = app.add_subcommand(
      "tune", "grid-search the integrator step size on the marginalized form");
  add_model(tune);
  add_data(tune);
  add_sampler_flags(tune, args);
  tune->add_option("--grid", grid, "candidate step sizes");

  CLI::App* bench = app.add_subcommand(
      "bench", "run every scheme x replicas and write chains and reports");
  add_model(bench);
  add_data(bench);
  add_sampler_flags(bench, args);
  bench->add_option("--replicas", args.replicas, "chains per scheme");
  bench->add_option("--grad-samples", args.grad_samples,
                    "nuisance draws per gradient estimate (renames the single "
                    "selected sghmc scheme)");
  bench->add_option("--jobs", args.jobs, "concurrent chains");
  bench->add_option("--scheme", args.schemes,
                    "restrict to these schemes (sghmc<N>, mh-hmc, hmc-marg)");
  bench->add_option("--grid", grid, "step-size grid when tuning");
  bench->add_option("--out", args.out, "output directory");

  CLI::App* check = app.add_subcommand(
      "check", "run consistency, unbiasedness, and gradient suites");
  add_model(check);
  add_data(check);
  check->add_option("--seed", args.seed, "RNG seed for probe points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (args.model != "twonormals" && args.data.empty()) {
    args.data = default_data_path(args.model);
  }
  if (args.samples < 1 || args.steps < 1 || args.replicas < 1 ||
      args.jobs < 1) {
    std::cerr << "error: --samples, --steps, --replicas, and --jobs must be "
                 "positive\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (gen_n == 0) gen_n = args.model == "gmm" ? 100 : 60;
      return cmd_generate(args, gen_n, gen_theta, gen_t, gen_k, gen_noise);
    }
    if (tune->parsed()) return cmd_tune(args, grid);
    if (bench->parsed()) return cmd_bench(args, grid);
    if (check->parsed()) return cmd_check(args);
  } catch (const ChainAbort& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

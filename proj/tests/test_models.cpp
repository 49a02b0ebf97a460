#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sdhmc/dataset.hpp"
#include "sdhmc/enumeration.hpp"
#include "sdhmc/math.hpp"
#include "sdhmc/model.hpp"
#include "sdhmc/model_zoo.hpp"
#include "sdhmc/models/exact_adapter.hpp"
#include "sdhmc/models/gmm.hpp"
#include "sdhmc/models/hmm.hpp"
#include "sdhmc/models/survey.hpp"
#include "sdhmc/models/two_normals.hpp"

using namespace sdhmc;

namespace {

SurveyModel small_survey() { return SurveyModel({1, 0, 1, 1, 0}); }
GmmModel small_gmm() {
  return GmmModel({-2.1, -1.3, -2.8, 1.7, 2.4, 0.9}, 2);
}
HmmModel small_hmm() { return HmmModel({0.1, 1.2, 0.8, -0.3}, 2, 0.5); }

Trace random_trace(const ModelInfo& model, Rng& rng) {
  Trace x(static_cast<std::size_t>(model.trace_dim()));
  for (double& v : x) v = rng.normal();
  return x;
}

// The full-conditional contract: for any two values of one site, the
// difference of conditional log weights equals the difference of the full
// log measure (nuisance prior + joint) between the two assignments.
void check_conditional_contract(const StochasticModel& model, Rng& rng) {
  Trace x = random_trace(model, rng);
  Nuisance z(static_cast<std::size_t>(model.site_count()));
  for (int site = 0; site < model.site_count(); ++site) {
    z[static_cast<std::size_t>(site)] =
        static_cast<int>(rng.uniform01() * model.site_cardinality(site));
  }
  model.begin_sweep(x);
  for (int site = 0; site < model.site_count(); ++site) {
    int card = model.site_cardinality(site);
    std::vector<double> lw(static_cast<std::size_t>(card));
    model.site_conditional(site, x, z, lw);
    Nuisance za = z;
    Nuisance zb = z;
    for (int a = 0; a < card; ++a) {
      for (int b = a + 1; b < card; ++b) {
        za[static_cast<std::size_t>(site)] = a;
        zb[static_cast<std::size_t>(site)] = b;
        double full_a = model.nuisance_log_prior(za) + model.log_joint(x, za);
        double full_b = model.nuisance_log_prior(zb) + model.log_joint(x, zb);
        CHECK(lw[static_cast<std::size_t>(a)] - lw[static_cast<std::size_t>(b)] ==
              doctest::Approx(full_a - full_b).epsilon(1e-11));
      }
    }
  }
}

}  // namespace

TEST_CASE("enumerated marginal equals the closed-form marginal") {
  SurveyModel survey = small_survey();
  GmmModel gmm = small_gmm();
  HmmModel hmm = small_hmm();
  TwoNormalsModel twonormals;
  const StochasticModel* stochs[] = {&survey, &gmm, &hmm, &twonormals};
  const MarginalizedModel* margs[] = {&survey, &gmm, &hmm, &twonormals};
  Rng rng(101, 0);
  for (int m = 0; m < 4; ++m) {
    for (int rep = 0; rep < 5; ++rep) {
      Trace x = random_trace(*stochs[m], rng);
      double lhs = enumerated_marginal(*stochs[m], x);
      double rhs = margs[m]->marginal_log_density(x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("site conditionals are consistent with the joint measure") {
  SurveyModel survey = small_survey();
  GmmModel gmm = small_gmm();
  HmmModel hmm = small_hmm();
  TwoNormalsModel twonormals;
  Rng rng(202, 0);
  check_conditional_contract(survey, rng);
  check_conditional_contract(gmm, rng);
  check_conditional_contract(hmm, rng);
  check_conditional_contract(twonormals, rng);
}

TEST_CASE("nuisance enumeration visits the whole space in odometer order") {
  SurveyModel survey = small_survey();
  CHECK(nuisance_space_size(survey) == 32);
  CHECK(nuisance_space_size(small_hmm()) == 16);
  CHECK(nuisance_space_size(small_gmm()) == 64);

  std::vector<Nuisance> seen;
  for_each_nuisance(survey, [&](const Nuisance& z) { seen.push_back(z); });
  REQUIRE(seen.size() == 32);
  CHECK(seen[0] == Nuisance{0, 0, 0, 0, 0});
  CHECK(seen[1] == Nuisance{1, 0, 0, 0, 0});
  CHECK(seen[2] == Nuisance{0, 1, 0, 0, 0});
  CHECK(seen[31] == Nuisance{1, 1, 1, 1, 1});

  GmmModel big(std::vector<double>(30, 0.5), 2);
  CHECK_THROWS_AS(nuisance_space_size(big), std::invalid_argument);
}

TEST_CASE("enumerated posterior is a proper distribution") {
  SurveyModel survey = small_survey();
  Rng rng(303, 0);
  Trace x = random_trace(survey, rng);
  auto post = enumerated_posterior(survey, x);
  REQUIRE(post.size() == 32);
  double total = 0.0;
  for (double p : post) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("survey conditional matches the randomized-response posterior") {
  SurveyModel yes_model({1});
  SurveyModel no_model({0});
  double theta = 0.67;
  Trace x{std::log(theta / (1.0 - theta))};
  Nuisance z{0};
  std::vector<double> lw(2);

  yes_model.begin_sweep(x);
  yes_model.site_conditional(0, x, z, lw);
  double p_honest = std::exp(lw[1] - log_add_exp(lw[0], lw[1]));
  CHECK(p_honest == doctest::Approx(0.5726495726495727).epsilon(1e-12));

  no_model.begin_sweep(x);
  no_model.site_conditional(0, x, z, lw);
  double p_honest_no = std::exp(lw[1] - log_add_exp(lw[0], lw[1]));
  CHECK(p_honest_no ==
        doctest::Approx((1.0 - theta) / (1.5 - theta)).epsilon(1e-12));
}

TEST_CASE("survey marginal difference isolates the answer likelihood") {
  SurveyModel yes_model({1});
  SurveyModel no_model({0});
  double theta = 0.67;
  Trace x{std::log(theta / (1.0 - theta))};
  double diff = yes_model.marginal_log_density(x) -
                no_model.marginal_log_density(x);
  double expected =
      std::log(0.5 * theta + 0.25) - std::log(0.75 - 0.5 * theta);
  CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
  CHECK(yes_model.constrained(Trace{0.0})[0] == doctest::Approx(0.5));
}

TEST_CASE("gmm density is invariant under component relabeling") {
  GmmModel gmm = small_gmm();
  Trace x{-1.2, 0.3, 0.8, -0.5};
  Trace swapped{0.8, -0.5, -1.2, 0.3};
  CHECK(gmm.marginal_log_density(x) ==
        doctest::Approx(gmm.marginal_log_density(swapped)).epsilon(1e-13));

  Nuisance z{0, 1, 0, 0, 1, 1};
  Nuisance relabeled{1, 0, 1, 1, 0, 0};
  CHECK(gmm.log_joint(x, z) ==
        doctest::Approx(gmm.log_joint(swapped, relabeled)).epsilon(1e-13));
}

TEST_CASE("gmm canonicalization orders components by mean") {
  GmmModel gmm = small_gmm();
  std::vector<double> params{2.0, 1.5, -1.0, 0.7};
  gmm.canonicalize(params);
  CHECK(params[0] == -1.0);
  CHECK(params[1] == 0.7);
  CHECK(params[2] == 2.0);
  CHECK(params[3] == 1.5);

  CHECK(gmm.param_names() ==
        std::vector<std::string>{"mu0", "sigma0", "mu1", "sigma1"});
  auto constrained = gmm.constrained(Trace{0.5, 0.0, -0.25, 1.0});
  CHECK(constrained[0] == 0.5);
  CHECK(constrained[1] == doctest::Approx(1.0));
  CHECK(constrained[2] == -0.25);
  CHECK(constrained[3] == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("hmm constrained parameters are stochastic matrix rows") {
  HmmModel hmm({0.5, 1.5, 0.2, 2.2}, 3, 0.5);
  CHECK(hmm.param_names().size() == 9);
  CHECK(hmm.param_names()[0] == "T00");
  CHECK(hmm.param_names()[5] == "T12");
  Rng rng(404, 0);
  Trace x = random_trace(hmm, rng);
  auto t = hmm.constrained(x);
  REQUIRE(t.size() == 9);
  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) {
      CHECK(t[static_cast<std::size_t>(3 * i + j)] > 0.0);
      row += t[static_cast<std::size_t>(3 * i + j)];
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hmm path measure decomposes into transitions and emissions") {
  HmmModel hmm = small_hmm();
  Trace x{0.4, -0.3, 0.9, 0.1};
  auto t = hmm.constrained(x);
  // transition and emission terms of one hidden path; the trace prior
  // cancels when two paths are compared at the same x
  auto path_measure = [&](const Nuisance& z) {
    double lp = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
      lp += std::log(t[static_cast<std::size_t>(2 * z[i - 1] + z[i])]);
    }
    const std::vector<double>& y = hmm.data();
    for (std::size_t i = 0; i < y.size(); ++i) {
      double v = (y[i] - z[i]) / 0.5;
      lp += -std::log(0.5) - 0.5 * 1.8378770664093453 - 0.5 * v * v;
    }
    return lp;
  };
  Nuisance za{1, 0, 0, 1};
  Nuisance zb{0, 1, 1, 1};
  CHECK(hmm.log_joint(x, za) - hmm.log_joint(x, zb) ==
        doctest::Approx(path_measure(za) - path_measure(zb)).epsilon(1e-11));
  CHECK(hmm.nuisance_log_prior(za) == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("two-normals matches its closed-form posterior quantities") {
  TwoNormalsModel model;
  Trace x{0.5};
  CHECK(model.marginal_log_density(x) ==
        doctest::Approx(-1.4007886052868632).epsilon(1e-13));

  auto [value, g] = marginal_grad(model, x);
  (void)value;
  CHECK(g[0] == doctest::Approx(1.8561103203032676).epsilon(1e-12));

  std::vector<double> lw(2);
  model.site_conditional(0, x, Nuisance{0}, lw);
  double p_plus = std::exp(lw[1] - log_add_exp(lw[0], lw[1]));
  CHECK(p_plus == doctest::Approx(0.9820137900379085).epsilon(1e-12));
}

TEST_CASE("exact-gradient adapter delegates to the marginalized density") {
  GmmModel gmm = small_gmm();
  ExactGradientAdapter adapter(gmm);
  Rng rng(505, 0);
  Trace x = random_trace(gmm, rng);
  CHECK(adapter.log_joint(x, Nuisance{}) ==
        doctest::Approx(gmm.marginal_log_density(x)).epsilon(1e-15));
  CHECK(adapter.site_count() == 0);
  Nuisance z = resample_nuisance(adapter, x, Nuisance{}, rng);
  CHECK(z.empty());
}

TEST_CASE("dataset round trips preserve every record") {
  SurveyData survey{{1, 0, 1, 1, 0, 0, 1}};
  std::stringstream s1;
  save_survey(s1, survey, {"survey dataset: demo"});
  SurveyData survey2 = load_survey(s1);
  CHECK(survey2.answers == survey.answers);

  GmmData gmm{{0.1, -2.3333333333333335, 5e-324, 1.7976931348623157e308}};
  std::stringstream s2;
  save_gmm(s2, gmm);
  GmmData gmm2 = load_gmm(s2);
  REQUIRE(gmm2.values.size() == gmm.values.size());
  for (std::size_t i = 0; i < gmm.values.size(); ++i) {
    CHECK(gmm2.values[i] == gmm.values[i]);
  }

  HmmData hmm{{2.625, -0.5, 1.25}, 3, 0.5};
  std::stringstream s3;
  save_hmm(s3, hmm);
  HmmData hmm2 = load_hmm(s3);
  CHECK(hmm2.n_states == 3);
  CHECK(hmm2.noise == 0.5);
  CHECK(hmm2.values == hmm.values);
}

TEST_CASE("dataset loaders skip comments and report bad lines") {
  std::stringstream good("# header\n\n1\n0\n# trailing\n1\n");
  SurveyData data = load_survey(good);
  CHECK(data.answers == std::vector<std::uint8_t>{1, 0, 1});

  std::stringstream bad("1\n2\n");
  try {
    load_survey(bad);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::stringstream no_header("0.5\n1.5\n");
  CHECK_THROWS_AS(load_hmm(no_header), std::runtime_error);

  CHECK_THROWS_AS(load_survey_file("/nonexistent/sdhmc.txt"),
                  std::runtime_error);
}

TEST_CASE("survey generator hits the randomized-response rate") {
  Rng rng(7, 0);
  SurveyData data = generate_survey(100000, SurveyTruth{}, rng);
  REQUIRE(data.answers.size() == 100000);
  double yes = 0.0;
  for (auto a : data.answers) yes += a;
  // P(yes) = 0.5 * theta + 0.25 = 0.585 at theta = 0.67
  CHECK(std::abs(yes / 100000.0 - 0.585) < 0.01);

  SurveyTruth all_yes{1.0, 1.0};
  SurveyData forced = generate_survey(50, all_yes, rng);
  for (auto a : forced.answers) CHECK(a == 1);
  SurveyTruth all_no{0.0, 1.0};
  SurveyData forced0 = generate_survey(50, all_no, rng);
  for (auto a : forced0.answers) CHECK(a == 0);

  CHECK_THROWS_AS(generate_survey(0, SurveyTruth{}, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_survey(10, SurveyTruth{1.5, 0.5}, rng),
                  std::invalid_argument);
}

TEST_CASE("gmm generator is centered and respects forced components") {
  Rng rng(8, 0);
  GmmData data = generate_gmm(20000, GmmTruth{}, rng);
  REQUIRE(data.values.size() == 20000);
  double mean = 0.0;
  for (double v : data.values) mean += v;
  mean /= 20000.0;
  CHECK(std::abs(mean) < 0.4);

  GmmTruth spike{7.0, 1e-8, 7.0, 1e-8, 0.5};
  GmmData forced = generate_gmm(100, spike, rng);
  for (double v : forced.values) {
    CHECK(std::abs(v - 7.0) < 1e-6);
  }
  CHECK_THROWS_AS(generate_gmm(0, GmmTruth{}, rng), std::invalid_argument);
}

TEST_CASE("hmm generator follows the symmetric transition law") {
  Rng rng(9, 0);
  // tiny noise so each value rounds to its hidden state
  HmmData data = generate_hmm(30000, 3, 1e-9, HmmTruth{}, rng);
  REQUIRE(data.values.size() == 30000);
  CHECK(data.n_states == 3);

  std::vector<int> states;
  states.reserve(data.values.size());
  for (double v : data.values) {
    int s = static_cast<int>(std::lround(v));
    REQUIRE(s >= 0);
    REQUIRE(s <= 2);
    states.push_back(s);
  }

  // stationary distribution via power iteration on the generator's matrix
  double p[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) p[i][j] = i == j ? 0.8 : 0.1;
  }
  double pi[3] = {1.0, 0.0, 0.0};
  for (int it = 0; it < 400; ++it) {
    double next[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) next[j] += pi[i] * p[i][j];
    }
    for (int j = 0; j < 3; ++j) pi[j] = next[j];
  }

  double freq[3] = {0.0, 0.0, 0.0};
  for (int s : states) freq[s] += 1.0;
  int self = 0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i] == states[i - 1]) ++self;
  }
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(freq[j] / 30000.0 - pi[j]) < 0.05);
  }
  CHECK(std::abs(self / 29999.0 - 0.8) < 0.02);

  HmmData single = generate_hmm(500, 1, 0.25, HmmTruth{}, rng);
  for (double v : single.values) CHECK(std::abs(v) < 2.0);

  HmmTruth frozen{1.0};
  HmmData constant = generate_hmm(200, 3, 1e-9, frozen, rng);
  long first = std::lround(constant.values[0]);
  for (double v : constant.values) CHECK(std::lround(v) == first);

  CHECK_THROWS_AS(generate_hmm(10, 3, 0.0, HmmTruth{}, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_hmm(0, 3, 0.5, HmmTruth{}, rng),
                  std::invalid_argument);
}

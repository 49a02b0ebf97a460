#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sdhmc/autodiff.hpp"
#include "sdhmc/counters.hpp"
#include "sdhmc/distributions.hpp"
#include "sdhmc/math.hpp"
#include "sdhmc/rng.hpp"

using namespace sdhmc;

TEST_CASE("log_sum_exp handles large and degenerate inputs") {
  std::vector<double> two{1000.0, 1000.0};
  CHECK(log_sum_exp(two) == doctest::Approx(1000.6931471805599).epsilon(1e-14));

  std::vector<double> one{3.0};
  CHECK(log_sum_exp(one) == doctest::Approx(3.0));

  std::vector<double> with_ninf{kNegInf, 5.0};
  CHECK(log_sum_exp(with_ninf) == doctest::Approx(5.0));

  std::vector<double> all_ninf{kNegInf, kNegInf, kNegInf};
  CHECK(log_sum_exp(all_ninf) == kNegInf);

  std::vector<double> empty;
  CHECK_THROWS_AS(log_sum_exp(empty), std::invalid_argument);

  std::vector<double> mixed{0.3, -1.2, 2.7};
  double naive = std::log(std::exp(0.3) + std::exp(-1.2) + std::exp(2.7));
  CHECK(log_sum_exp(mixed) == doctest::Approx(naive).epsilon(1e-14));
}

TEST_CASE("log_add_exp agrees with log_sum_exp and absorbs -inf") {
  CHECK(log_add_exp(1.5, -0.4) ==
        doctest::Approx(log_sum_exp(std::vector<double>{1.5, -0.4}))
            .epsilon(1e-15));
  CHECK(log_add_exp(-0.4, 1.5) == doctest::Approx(log_add_exp(1.5, -0.4)));
  CHECK(log_add_exp(kNegInf, 2.0) == 2.0);
  CHECK(log_add_exp(2.0, kNegInf) == 2.0);
  CHECK(log_add_exp(kNegInf, kNegInf) == kNegInf);
}

TEST_CASE("sigmoid is accurate, bounded, and symmetric") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(sigmoid(-1.0) == doctest::Approx(1.0 - 0.7310585786300049));
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) <= 1.0);
  CHECK(std::isfinite(sigmoid(-800.0)));
  CHECK(sigmoid(3.0) > sigmoid(2.9));
}

TEST_CASE("log_softmax normalizes and is shift invariant") {
  std::vector<double> u{0.4, -1.1, 2.2};
  auto out = log_softmax(u);
  double total = 0.0;
  for (double v : out) total += std::exp(v);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  std::vector<double> shifted{u};
  for (double& v : shifted) v += 123.0;
  auto out2 = log_softmax(shifted);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out2[i] == doctest::Approx(out[i]).epsilon(1e-12));
  }

  std::vector<double> pair{0.0, 0.0};
  auto half = log_softmax(pair);
  CHECK(half[0] == doctest::Approx(std::log(0.5)));
  CHECK(half[1] == doctest::Approx(std::log(0.5)));
}

TEST_CASE("philox block function matches published vectors") {
  auto z = Rng::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);

  auto o = Rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                           {0xffffffffu, 0xffffffffu});
  CHECK(o[0] == 0x408f276du);
  CHECK(o[1] == 0x41c83b0eu);
  CHECK(o[2] == 0xa20bc7c6u);
  CHECK(o[3] == 0x6d5451fdu);

  auto p = Rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                           {0xa4093822u, 0x299f31d0u});
  CHECK(p[0] == 0xd16cfe09u);
  CHECK(p[1] == 0x94fdccebu);
  CHECK(p[2] == 0x5001e420u);
  CHECK(p[3] == 0x24126ea1u);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(17, 3);
  Rng b(17, 3);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u32() == b.next_u32());
  }

  Rng c(17, 4);
  Rng d(18, 3);
  Rng base(17, 3);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 64; ++i) {
    std::uint32_t r = base.next_u32();
    if (r == c.next_u32()) ++same_c;
    if (r == d.next_u32()) ++same_d;
  }
  CHECK(same_c < 4);
  CHECK(same_d < 4);
}

TEST_CASE("uniform01 stays inside [0, 1)") {
  Rng rng(5, 0);
  for (int i = 0; i < 20000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal and bernoulli draws have the right moments") {
  Rng rng(11, 0);
  const int n = 100000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));

  int hits = 0;
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(0.3)) ++hits;
  }
  CHECK(std::abs(hits / double(n) - 0.3) < 0.01);
}

TEST_CASE("eval counters tally density and log-sum-exp work") {
  auto& counters = eval_counters();
  counters.reset();
  CHECK(counters.dist_evals == 0);
  CHECK(counters.lse_terms == 0);

  normal_logpdf(0.0, 1.0, 0.3);
  CHECK(counters.dist_evals == 1);
  bernoulli_logpmf(0.4, true);
  CHECK(counters.dist_evals == 2);

  Tape tape;
  {
    TapeGuard guard(tape);
    Dual x(0.3, tape.record_input());
    normal_logpdf(Dual(0.0), Dual(1.0), x);
  }
  CHECK(counters.dist_evals == 3);

  counters.reset();
  log_add_exp(0.0, 1.0);
  CHECK(counters.lse_terms == 2);
  std::vector<double> terms{0.1, 0.2, 0.3, 0.4, 0.5};
  log_sum_exp(terms);
  CHECK(counters.lse_terms == 7);
  counters.reset();
}

TEST_CASE("distribution log densities match frozen references") {
  CHECK(normal_logpdf(0.0, 1.0, 0.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-15));
  CHECK(normal_logpdf(1.0, 0.5, 0.0) ==
        doctest::Approx(-2.2257913526447273).epsilon(1e-15));
  CHECK(bernoulli_logpmf(0.25, true) == doctest::Approx(std::log(0.25)));
  CHECK(bernoulli_logpmf(0.25, false) == doctest::Approx(std::log(0.75)));
  CHECK(beta_logpdf(2.0, 3.0, 0.5) ==
        doctest::Approx(0.4054651081081644).epsilon(1e-14));
  CHECK(beta_logpdf(2.0, 3.0, 0.0) == kNegInf);
  CHECK(beta_logpdf(2.0, 3.0, 1.0) == kNegInf);
}

TEST_CASE("distribution argument validation") {
  CHECK_THROWS_AS(normal_logpdf(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_logpdf(0.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_logpmf(1.5, true), std::invalid_argument);
  CHECK_THROWS_AS(beta_logpdf(0.0, 1.0, 0.5), std::invalid_argument);
  Rng rng(0, 0);
  CHECK_THROWS_AS(normal_sample(0.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_sample(-0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(uniform_sample(2.0, 1.0, rng), std::invalid_argument);
}

TEST_CASE("categorical sampling consumes one variate and matches weights") {
  std::vector<double> lw{std::log(0.982), std::log(0.018)};

  Rng a(7, 3);
  Rng b(7, 3);
  categorical_sample(lw, a);
  b.uniform01();
  CHECK(a.uniform01() == b.uniform01());

  Rng rng(21, 0);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    int k = categorical_sample(lw, rng);
    REQUIRE(k >= 0);
    REQUIRE(k <= 1);
    ones += k;
  }
  double freq = ones / double(n);
  double se = std::sqrt(0.018 * 0.982 / n);
  CHECK(std::abs(freq - 0.018) < 4.0 * se);
}

TEST_CASE("reverse-mode gradients match hand-derived values") {
  std::vector<double> x{1.0, 2.0};
  auto [value, g] = grad(
      [](std::span<const Dual> in) {
        return in[0] * in[1] + exp(in[0]);
      },
      x);
  CHECK(value == doctest::Approx(2.0 + std::exp(1.0)).epsilon(1e-15));
  CHECK(g[0] == doctest::Approx(2.0 + std::exp(1.0)).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dual arithmetic chain agrees with finite differences") {
  auto f = [](std::span<const Dual> in) {
    Dual a = log(in[0]) * in[1] - in[1] / in[0];
    return sigmoid(a) + exp(-a);
  };
  std::vector<double> x{1.7, -0.6};
  auto [value, g] = grad(f, x);
  (void)value;
  const double h = 1e-6;
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::vector<double> hi{x};
    std::vector<double> lo{x};
    hi[j] += h;
    lo[j] -= h;
    auto fplain = [&](const std::vector<double>& p) {
      std::vector<Dual> in(p.begin(), p.end());
      return f(std::span<const Dual>(in.data(), in.size())).value;
    };
    double fd = (fplain(hi) - fplain(lo)) / (2.0 * h);
    CHECK(g[j] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("normal_logpdf partials cover mean, scale, and value") {
  auto f = [](std::span<const Dual> in) {
    return normal_logpdf(in[0], in[1], in[2]);
  };
  std::vector<double> x{0.4, 1.3, -0.9};
  auto [value, g] = grad(f, x);
  (void)value;
  double mu = x[0], sigma = x[1], v = x[2];
  double z = (v - mu) / sigma;
  CHECK(g[0] == doctest::Approx(z / sigma).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx((z * z - 1.0) / sigma).epsilon(1e-13));
  CHECK(g[2] == doctest::Approx(-z / sigma).epsilon(1e-13));
}

TEST_CASE("log_sum_exp gradient is the softmax of its inputs") {
  std::vector<double> x{0.1, 1.4, -2.0};
  auto [value, g] = grad(
      [](std::span<const Dual> in) {
        return log_sum_exp(in);
      },
      x);
  (void)value;
  auto weights = log_softmax(x);
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    CHECK(g[j] == doctest::Approx(std::exp(weights[j])).epsilon(1e-13));
    total += g[j];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("constants and unused inputs get zero gradient") {
  std::vector<double> x{0.5, 2.5};
  auto [value, g] = grad(
      [](std::span<const Dual> in) {
        return in[0] * 3.0 + Dual(7.0);
      },
      x);
  CHECK(value == doctest::Approx(8.5));
  CHECK(g[0] == 3.0);
  CHECK(g[1] == 0.0);

  auto [cvalue, cg] = grad(
      [](std::span<const Dual>) {
        return Dual(4.0);
      },
      x);
  CHECK(cvalue == 4.0);
  CHECK(cg[0] == 0.0);
  CHECK(cg[1] == 0.0);
}

TEST_CASE("nan produced during recording raises EvaluationError") {
  std::vector<double> x{-1.0};
  CHECK_THROWS_AS(grad(
                      [](std::span<const Dual> in) {
                        return log(in[0]);
                      },
                      x),
                  EvaluationError);
  try {
    grad(
        [](std::span<const Dual> in) {
          return log(in[0]) * in[0];
        },
        x);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("tape node") != std::string::npos);
    CHECK(e.node() == 1);
  }
}

TEST_CASE("infinities pass through recording without error") {
  std::vector<double> x{-800.0};
  auto [value, g] = grad(
      [](std::span<const Dual> in) {
        // exp underflows to 0, log of that is -inf; still a legal log weight
        return log(exp(in[0]));
      },
      x);
  CHECK(value == kNegInf);
  CHECK(g.size() == 1);
}

TEST_CASE("tape usage errors are reported as logic errors") {
  Tape tape;
  TapeGuard guard(tape);
  CHECK_THROWS_AS([&] { TapeGuard inner(tape); }(), std::logic_error);

  Dual x(1.0, tape.record_input());
  Dual y = x * x;
  (void)y;
  CHECK_THROWS_AS(tape.record_input(), std::logic_error);
}

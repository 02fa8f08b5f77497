#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ginar/model.hpp"
#include "test_util.hpp"

using namespace ginar;
using doctest::Approx;

namespace {

GinarModel po_inar1(double a, double mu) {
  GinarModel m;
  m.alpha = {a};
  m.thinning = {Thinning::Binomial, 0.0};
  m.innovation = {Innovation::Poisson, mu, 0.0};
  return m;
}

GinarModel geom_inar1(double a, double mu) {
  GinarModel m = po_inar1(a, mu);
  m.thinning.family = Thinning::NegBinomial;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("validation") {
  GinarModel m = po_inar1(0.5, 1.0);
  CHECK_NOTHROW(validate_model(m));
  m.alpha = {0.6, 0.5};
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m.alpha = {-0.1};
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m.alpha = {};
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m = po_inar1(0.5, -2.0);
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
}

TEST_CASE("conditional moments") {
  const GinarModel m = po_inar1(0.5, 1.0);
  const int lag3[] = {3};
  CHECK(conditional_mean(m, lag3) == Approx(2.5).epsilon(1e-14));
  CHECK(conditional_variance(m, lag3) == Approx(0.25 * 3 + 1.0).epsilon(1e-14));

  const GinarModel g = geom_inar1(0.5, 1.0);
  const int lag2[] = {2};
  CHECK(conditional_variance(g, lag2) == Approx(0.75 * 2 + 1.0).epsilon(1e-14));

  GinarModel m2 = po_inar1(0.3, 0.8);
  m2.alpha = {0.3, 0.2};
  const int lags[] = {4, 1};
  CHECK(conditional_mean(m2, lags) == Approx(0.3 * 4 + 0.2 * 1 + 0.8).epsilon(1e-14));
  const int bad[] = {1};
  CHECK_THROWS_AS(conditional_mean(m2, bad), std::invalid_argument);
}

TEST_CASE("marginal mean and variance") {
  const GinarModel m = po_inar1(0.5, 1.0);
  CHECK(marginal_mean(m) == Approx(2.0).epsilon(1e-14));
  // binomial thinning + Poisson innovations keep a Poisson marginal
  CHECK(marginal_variance(m) == Approx(2.0).epsilon(1e-12));

  const GinarModel g = geom_inar1(0.5, 1.0);
  CHECK(marginal_variance(g) == Approx((0.75 * 2.0 + 1.0) / 0.75).epsilon(1e-12));
}

TEST_CASE("acf closed forms") {
  const GinarModel m = po_inar1(0.55, 1.0);
  const auto rho = acf(m, 6);
  CHECK(rho[0] == 1.0);
  for (int k = 1; k <= 6; ++k) CHECK(rho[k] == Approx(std::pow(0.55, k)).epsilon(1e-12));

  GinarModel m2 = po_inar1(0.0, 1.0);
  m2.alpha = {0.4, 0.3};
  const auto r2 = acf(m2, 8);
  // rho(1) = a1/(1-a2) for p = 2
  CHECK(r2[1] == Approx(0.4 / 0.7).epsilon(1e-12));
  CHECK(r2[2] == Approx(0.4 * r2[1] + 0.3).epsilon(1e-12));
  for (int k = 3; k <= 8; ++k)
    CHECK(r2[k] == Approx(0.4 * r2[k - 1] + 0.3 * r2[k - 2]).epsilon(1e-12));

  const auto r0 = acf(po_inar1(0.0, 2.0), 4);
  for (int k = 1; k <= 4; ++k) CHECK(r0[k] == Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("spectral density integrates to the marginal variance") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const GinarModel m = testutil::random_model(rng, 4);
    // composite Simpson over [-pi, pi] as the independent oracle
    const int N = 10000;
    const double h = 2.0 * std::numbers::pi / N;
    double acc = 0.0;
    for (int i = 0; i <= N; ++i) {
      const double nu = -std::numbers::pi + i * h;
      const double w = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * spectral_density(m, nu);
    }
    acc *= h / 3.0;
    CHECK(acc == Approx(marginal_variance(m)).epsilon(5e-3));
  }
}

TEST_CASE("flat spectrum without autoregression") {
  const GinarModel m = po_inar1(0.0, 2.0);
  CHECK(spectral_density(m, 0.3) ==
        Approx(marginal_variance(m) / (2 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("simulation is reproducible and respects support") {
  const GinarModel m = po_inar1(0.5, 1.0);
  RandomStream r1(77), r2(77);
  const auto a = simulate(m, 400, 100, r1);
  const auto b = simulate(m, 400, 100, r2);
  CHECK(a == b);
  CHECK(a.size() == 400);
  for (int v : a) CHECK(v >= 0);
}

TEST_CASE("long-run simulated moments match the marginal formulas") {
  std::mt19937_64 pick(3);
  for (int rep = 0; rep < 3; ++rep) {
    const GinarModel m = testutil::random_model(pick, 2);
    RandomStream rng(1000 + rep);
    const auto x = simulate(m, 200000, 600, rng);
    const double mu = marginal_mean(m), v = marginal_variance(m);
    CHECK(testutil::mean_of(x) == Approx(mu).epsilon(0.03));
    CHECK(testutil::variance_of(x) == Approx(v).epsilon(0.06));
  }
}

TEST_CASE("simulated acf tracks the model acf") {
  const GinarModel m = po_inar1(0.6, 1.0);
  RandomStream rng(5150);
  const auto x = simulate(m, 100000, 500, rng);
  const auto rho = acf(m, 3);
  const double xbar = testutil::mean_of(x);
  for (int k = 1; k <= 3; ++k) {
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t + k < x.size(); ++t)
      num += (x[t] - xbar) * (x[t + k] - xbar);
    for (size_t t = 0; t < x.size(); ++t) den += (x[t] - xbar) * (x[t] - xbar);
    CHECK(num / den == Approx(rho[k]).epsilon(0.05));
  }
}

TEST_CASE("seasonal mean") {
  SeasonalMean s{0.3, 0.5, -0.2, 12};
  CHECK(seasonal_mu(s, 3) ==
        Approx(std::exp(0.3 + 0.5 * std::sin(2 * std::numbers::pi * 3 / 12.0) -
                        0.2 * std::cos(2 * std::numbers::pi * 3 / 12.0)))
            .epsilon(1e-14));
  for (long t : {-5L, 0L, 7L, 30L})
    CHECK(seasonal_mu(s, t) == Approx(seasonal_mu(s, t + 12)).epsilon(1e-13));
  CHECK(seasonal_mu(SeasonalMean{0, 0, 0, 4}, 9) == Approx(1.0));
  CHECK_THROWS_AS(seasonal_mu(SeasonalMean{0, 0, 0, 0}, 1), std::invalid_argument);
}

TEST_CASE("seasonal simulation tracks the phase means") {
  GinarModel m = po_inar1(0.4, 1.0);
  const SeasonalMean s{0.2, 0.8, 0.0, 6};
  RandomStream rng(909);
  const int n = 120000;
  const auto x = simulate_seasonal(m, s, n, 300, rng);
  REQUIRE(static_cast<int>(x.size()) == n);
  // phase means: E X_t = sum_k alpha^k mu_{t-k} summed over the past
  for (int phase = 1; phase <= 6; ++phase) {
    double expect = 0.0;
    for (int k = 0; k < 200; ++k)
      expect += std::pow(0.4, k) * seasonal_mu(s, phase - k);
    double got = 0.0;
    int cnt = 0;
    for (int t = phase; t <= n; t += 6) {
      got += x[t - 1];
      ++cnt;
    }
    got /= cnt;
    CHECK(got == Approx(expect).epsilon(0.05));
  }
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <random>

#include "ginar/thinning.hpp"
#include "test_util.hpp"

using namespace ginar;
using doctest::Approx;

namespace {

ThinningSpec bin() { return {Thinning::Binomial, 0.0}; }
ThinningSpec nb() { return {Thinning::NegBinomial, 0.0}; }
ThinningSpec rho(double r) { return {Thinning::RhoBinomial, r}; }

double series_mean(const ThinningSpec& s, double a) {
  double m = 0.0, mass = 0.0;
  for (int y = 0; y < 4000 && 1.0 - mass > 1e-14; ++y) {
    const double p = counting_pmf(s, a, y);
    m += y * p;
    mass += p;
  }
  return m;
}

double series_var(const ThinningSpec& s, double a) {
  double m2 = 0.0, mass = 0.0;
  for (int y = 0; y < 4000 && 1.0 - mass > 1e-14; ++y) {
    const double p = counting_pmf(s, a, y);
    m2 += static_cast<double>(y) * y * p;
    mass += p;
  }
  const double m = series_mean(s, a);
  return m2 - m * m;
}

}  // namespace

TEST_SUITE_BEGIN("thinning");

TEST_CASE("parameter validation") {
  RandomStream rng(1);
  CHECK_THROWS_AS(thin(bin(), -0.1, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(thin(bin(), 1.0, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(counting_pmf(rho(1.0), 0.4, 0), std::invalid_argument);
  CHECK_THROWS_AS(counting_pmf(rho(-0.2), 0.4, 0), std::invalid_argument);
  CHECK_THROWS_AS(thin(bin(), 0.5, -1, rng), std::invalid_argument);
}

TEST_CASE("empty sum and degenerate coefficient") {
  RandomStream rng(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(thin(bin(), 0.5, 0, rng) == 0);
    CHECK(thin(nb(), 0.7, 0, rng) == 0);
    CHECK(thin(rho(0.3), 0.4, 0, rng) == 0);
    CHECK(thin(bin(), 0.0, 9, rng) == 0);
    CHECK(thin(nb(), 0.0, 9, rng) == 0);
    CHECK(thin(rho(0.3), 0.0, 9, rng) == 0);
  }
}

TEST_CASE("binomial thinning never exceeds x") {
  RandomStream rng(11);
  for (int i = 0; i < 2000; ++i) {
    const int v = thin(bin(), 0.8, 7, rng);
    CHECK(v >= 0);
    CHECK(v <= 7);
  }
}

TEST_CASE("counting pmf closed-form values") {
  CHECK(counting_pmf(bin(), 0.3, 0) == Approx(0.7).epsilon(1e-14));
  CHECK(counting_pmf(bin(), 0.3, 1) == Approx(0.3).epsilon(1e-14));
  CHECK(counting_pmf(bin(), 0.3, 2) == 0.0);
  // geometric with success 1/(1+alpha)
  CHECK(counting_pmf(nb(), 0.5, 0) == Approx(1.0 / 1.5).epsilon(1e-14));
  CHECK(counting_pmf(nb(), 0.5, 2) == Approx(0.25 / std::pow(1.5, 3)).epsilon(1e-14));
  // zero-inflated shifted geometric, success alpha/(1+rho)
  const double a = 0.4 / 1.2, th = 0.2 / 1.2;
  CHECK(counting_pmf(rho(0.2), 0.4, 0) == Approx(1.0 - a).epsilon(1e-14));
  CHECK(counting_pmf(rho(0.2), 0.4, 1) == Approx(a * (1.0 - th)).epsilon(1e-14));
  CHECK(counting_pmf(rho(0.2), 0.4, 3) == Approx(a * th * th * (1.0 - th)).epsilon(1e-14));
}

TEST_CASE("counting mean equals alpha for every family") {
  for (double a : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    CHECK(series_mean(bin(), a) == Approx(a).epsilon(1e-12));
    CHECK(series_mean(nb(), a) == Approx(a).epsilon(1e-10));
    for (double r : {0.0, 0.2, 0.5, 0.9})
      CHECK(series_mean(rho(r), a) == Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("variance coefficient values and series cross-check") {
  CHECK(variance_coeff(bin(), 0.3) == Approx(0.21).epsilon(1e-14));
  CHECK(variance_coeff(nb(), 0.5) == Approx(0.75).epsilon(1e-14));
  CHECK(variance_coeff(rho(0.2), 0.4) == Approx(0.4 * (1.0 + 0.4 - 0.4)).epsilon(1e-14));
  CHECK(variance_coeff(rho(0.0), 0.4) == Approx(variance_coeff(bin(), 0.4)).epsilon(1e-14));
  for (double a : {0.1, 0.4, 0.7}) {
    CHECK(series_var(bin(), a) == Approx(variance_coeff(bin(), a)).epsilon(1e-9));
    CHECK(series_var(nb(), a) == Approx(variance_coeff(nb(), a)).epsilon(1e-9));
    CHECK(series_var(rho(0.35), a) == Approx(variance_coeff(rho(0.35), a)).epsilon(1e-9));
  }
}

TEST_CASE("rho family degenerates to the Bernoulli family at rho = 0") {
  for (double a : {0.2, 0.6}) {
    for (int y = 0; y < 5; ++y)
      CHECK(counting_pmf(rho(0.0), a, y) == Approx(counting_pmf(bin(), a, y)).epsilon(1e-14));
    for (double u : {0.0, 0.7, 2.9}) {
      const auto za = counting_chf(rho(0.0), a, u), zb = counting_chf(bin(), a, u);
      CHECK(std::abs(za - zb) < 1e-14);
    }
  }
}

TEST_CASE("chf matches the pmf series route") {
  for (const ThinningSpec& s : {bin(), nb(), rho(0.45)}) {
    for (double a : {0.15, 0.5, 0.85}) {
      for (double u : {-2.5, -0.3, 0.0, 0.9, 3.1}) {
        const auto direct = counting_chf(s, a, u);
        const auto series =
            testutil::chf_from_pmf([&](int y) { return counting_pmf(s, a, y); }, u);
        CHECK(std::abs(direct - series) < 1e-10);
      }
    }
  }
}

TEST_CASE("property sweep: normalization, chf bounds, mean preservation") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 1200; ++rep) {
    ThinningSpec s;
    s.family = static_cast<Thinning>(rep % 3);
    if (s.family == Thinning::RhoBinomial) s.rho = 0.98 * unif(rng);
    const double a = 0.02 + 0.96 * unif(rng);

    double mass = 0.0, mean = 0.0;
    for (int y = 0; y < 5000 && 1.0 - mass > 1e-13; ++y) {
      const double p = counting_pmf(s, a, y);
      CHECK(p >= 0.0);
      mass += p;
      mean += y * p;
    }
    CHECK(std::abs(mass - 1.0) < 1e-8);
    CHECK(std::abs(mean - a) < 1e-8);

    const double u = -3.1 + 6.2 * unif(rng);
    const auto z = counting_chf(s, a, u);
    CHECK(std::abs(counting_chf(s, a, 0.0) - 1.0) < 1e-12);
    CHECK(std::abs(z) <= 1.0 + 1e-12);
  }
}

TEST_CASE("thinned pmf closed forms and convolution oracle") {
  // binomial: direct binomial probabilities
  for (int z = 0; z <= 5; ++z) {
    double direct = thinned_pmf(bin(), 0.3, 5, z);
    double binom = 1.0;
    // C(5,z) 0.3^z 0.7^(5-z) computed by brute force
    double c = 1.0;
    for (int i = 0; i < z; ++i) c = c * (5 - i) / (i + 1);
    binom = c * std::pow(0.3, z) * std::pow(0.7, 5 - z);
    CHECK(direct == Approx(binom).epsilon(1e-12));
  }
  // every family: x-fold convolution of the counting pmf
  for (const ThinningSpec& s : {bin(), nb(), rho(0.3)}) {
    for (double a : {0.25, 0.6}) {
      for (int x : {1, 2, 3, 7}) {
        const auto oracle = testutil::convolve_pmf(
            [&](int y) { return counting_pmf(s, a, y); }, x, 24);
        for (int z = 0; z <= 24; ++z)
          CHECK(thinned_pmf(s, a, x, z) == Approx(oracle[z]).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("thinned pmf normalization and degenerate cases") {
  for (const ThinningSpec& s : {bin(), nb(), rho(0.5)}) {
    double mass = 0.0;
    for (int z = 0; z <= 300; ++z) mass += thinned_pmf(s, 0.45, 9, z);
    CHECK(std::abs(mass - 1.0) < 1e-10);
    CHECK(thinned_pmf(s, 0.45, 0, 0) == 1.0);
    CHECK(thinned_pmf(s, 0.45, 0, 3) == 0.0);
    CHECK(thinned_pmf(s, 0.0, 5, 0) == 1.0);
  }
  const auto row = thinned_pmf_row(rho(0.4), 0.5, 6, 40);
  for (int z = 0; z <= 40; ++z)
    CHECK(row[z] == Approx(thinned_pmf(rho(0.4), 0.5, 6, z)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("sampler matches the thinned pmf") {
  RandomStream rng(2024);
  for (const ThinningSpec& s : {bin(), nb(), rho(0.25)}) {
    const double a = 0.55;
    const int x = 6, N = 200000;
    std::vector<double> freq(61, 0.0);
    double mean = 0.0;
    for (int i = 0; i < N; ++i) {
      const int v = thin(s, a, x, rng);
      if (v <= 60) freq[v] += 1.0 / N;
      mean += static_cast<double>(v) / N;
    }
    CHECK(mean == Approx(a * x).epsilon(0.02));
    for (int z = 0; z <= 20; ++z)
      CHECK(std::abs(freq[z] - thinned_pmf(s, a, x, z)) < 4.0 / std::sqrt(static_cast<double>(N)));
  }
}

TEST_SUITE_END();

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ginar/estimation.hpp"
#include "ginar/model.hpp"
#include "ginar/rng.hpp"
#include "ginar/transition.hpp"
#include "test_util.hpp"

using namespace ginar;
using doctest::Approx;

namespace {

GinarModel po1(double a, double mu) {
  GinarModel m;
  m.alpha = {a};
  m.innovation = {Innovation::Poisson, mu, 0.0};
  return m;
}

double rmse_alpha(const std::vector<double>& est, double truth) {
  double acc = 0.0;
  for (double v : est) acc += (v - truth) * (v - truth);
  return std::sqrt(acc / est.size());
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("simplex transform round trips and stays interior") {
  RandomStream rng = make_stream(101, {1});
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int p = 1 + static_cast<int>(rng() % 4);
    std::vector<double> alpha(p);
    double total = 0.05 + 0.9 * unif(rng);
    double left = total;
    for (int j = 0; j < p; ++j) {
      alpha[j] = (j + 1 == p) ? left : left * (0.2 + 0.6 * unif(rng));
      left -= alpha[j];
    }
    const std::vector<double> z = simplex_to_real(alpha);
    const std::vector<double> back = simplex_from_real(z);
    for (int j = 0; j < p; ++j) CHECK(back[j] == Approx(alpha[j]).epsilon(1e-12));
  }
  for (int rep = 0; rep < 200; ++rep) {
    const int p = 1 + static_cast<int>(rng() % 4);
    std::vector<double> z(p);
    for (int j = 0; j < p; ++j) z[j] = -30.0 + 60.0 * unif(rng);
    const std::vector<double> alpha = simplex_from_real(z);
    double s = 0.0;
    for (double a : alpha) {
      CHECK(a > 0.0);
      s += a;
    }
    CHECK(s < 1.0);
  }
  CHECK_THROWS_AS(simplex_to_real(std::vector<double>{0.6, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(simplex_to_real(std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("sample acvf matches a direct computation") {
  const std::vector<int> x = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5};
  const int n = static_cast<int>(x.size());
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= n;
  const std::vector<double> g = sample_acvf(x, 3);
  for (int k = 0; k <= 3; ++k) {
    double want = 0.0;
    for (int t = k; t < n; ++t) want += (x[t] - xbar) * (x[t - k] - xbar);
    want /= n;
    CHECK(g[k] == Approx(want).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sample_acvf(x, 11), std::invalid_argument);
}

TEST_CASE("periodogram matches a direct transform and sums to the variance") {
  RandomStream rng = make_stream(102, {7});
  std::vector<int> x(64);
  for (auto& v : x) v = static_cast<int>(rng() % 9);
  const int n = static_cast<int>(x.size());
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= n;

  const Periodogram I = periodogram(x);
  REQUIRE(static_cast<int>(I.freq.size()) == n / 2);
  for (int j = 1; j <= n / 2; ++j) {
    const double nu = 2.0 * std::numbers::pi * j / n;
    double re = 0.0, im = 0.0;
    for (int t = 1; t <= n; ++t) {
      re += (x[t - 1] - xbar) * std::cos(nu * t);
      im -= (x[t - 1] - xbar) * std::sin(nu * t);
    }
    const double want = (re * re + im * im) / (2.0 * std::numbers::pi * n);
    CHECK(I.freq[j - 1] == Approx(nu).epsilon(1e-14));
    CHECK(I.power[j - 1] == Approx(want).epsilon(1e-10));
  }

  // discrete Parseval identity on the half grid (n even)
  double total = 0.0;
  for (double v : I.power) total += v;
  total = 2.0 * total - I.power.back();
  const double g0 = sample_acvf(x, 0)[0];
  CHECK(2.0 * std::numbers::pi * total / n == Approx(g0).epsilon(1e-10));
}

TEST_CASE("yule-walker closed forms at order one and two") {
  RandomStream rng = make_stream(103, {1});
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<int> x = simulate(m, 400, 200, rng);
  FamilySpec fam;

  const std::vector<double> g = sample_acvf(x, 2);
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= x.size();

  const FitResult f1 = fit_yw(x, 1, fam);
  CHECK(f1.theta[0] == Approx(g[1] / g[0]).epsilon(1e-12));
  CHECK(f1.theta[1] == Approx((1.0 - g[1] / g[0]) * xbar).epsilon(1e-12));
  CHECK(f1.n_used == 400);
  CHECK(f1.converged);

  const FitResult f2 = fit_yw(x, 2, fam);
  // 2x2 solve by hand
  const double det = g[0] * g[0] - g[1] * g[1];
  const double a1 = (g[0] * g[1] - g[1] * g[2]) / det;
  const double a2 = (g[0] * g[2] - g[1] * g[1]) / det;
  CHECK(f2.theta[0] == Approx(a1).epsilon(1e-10));
  CHECK(f2.theta[1] == Approx(a2).epsilon(1e-10));
  CHECK(f2.theta[2] == Approx((1.0 - a1 - a2) * xbar).epsilon(1e-10));
}

TEST_CASE("yule-walker innovation dispersion uses the variance identity") {
  RandomStream rng = make_stream(103, {2});
  GinarModel m = po1(0.4, 1.0);
  m.innovation = {Innovation::NegBinomial, 1.0, 1.0};
  const std::vector<int> x = simulate(m, 6000, 300, rng);
  FamilySpec fam;
  fam.innovation = Innovation::NegBinomial;
  const FitResult f = fit_yw(x, 1, fam);
  REQUIRE(f.theta.size() == 3);

  const std::vector<double> g = sample_acvf(x, 1);
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= x.size();
  const double a = g[1] / g[0];
  const double mu = (1.0 - a) * xbar;
  const double vp = g[0] - a * g[1];
  const double s2 = vp - xbar * a * (1.0 - a);
  CHECK(f.theta[2] == Approx(std::max((s2 - mu) / (mu * mu), 0.0)).epsilon(1e-10));
}

TEST_CASE("yule-walker flags infeasible estimates") {
  std::vector<int> x;
  for (int t = 0; t < 60; ++t) x.push_back(t % 2 == 0 ? 4 : 0);
  FamilySpec fam;
  const FitResult f = fit_yw(x, 1, fam);
  CHECK(f.theta[0] < 0.0);
  CHECK_FALSE(f.feasible);
  const GinarModel m = fit_model(f);
  CHECK(m.alpha[0] >= 0.0);
  CHECK(m.innovation.mu > 0.0);
}

TEST_CASE("cls solves the least squares problem") {
  RandomStream rng = make_stream(104, {1});
  const GinarModel m = po1(0.45, 1.2);
  const std::vector<int> x = simulate(m, 300, 200, rng);
  FamilySpec fam;
  const FitResult f = fit_cls(x, 1, fam);

  // normal equations by hand: regress x_t on (x_{t-1}, 1)
  const int n = static_cast<int>(x.size());
  double sxx = 0.0, sx = 0.0, sxy = 0.0, sy = 0.0, cnt = 0.0;
  for (int t = 1; t < n; ++t) {
    sxx += static_cast<double>(x[t - 1]) * x[t - 1];
    sx += x[t - 1];
    sxy += static_cast<double>(x[t - 1]) * x[t];
    sy += x[t];
    cnt += 1.0;
  }
  const double det = sxx * cnt - sx * sx;
  const double a = (sxy * cnt - sx * sy) / det;
  const double mu = (sxx * sy - sx * sxy) / det;
  CHECK(f.theta[0] == Approx(a).epsilon(1e-9));
  CHECK(f.theta[1] == Approx(mu).epsilon(1e-9));
  CHECK(f.n_used == n - 1);

  double sse = 0.0;
  for (int t = 1; t < n; ++t) {
    const double e = x[t] - a * x[t - 1] - mu;
    sse += e * e;
  }
  CHECK(*f.objective == Approx(sse / (n - 1)).epsilon(1e-9));
}

TEST_CASE("conditional likelihood matches a direct convolution sum") {
  RandomStream rng = make_stream(105, {1});
  GinarModel m;
  m.alpha = {0.35, 0.2};
  m.innovation = {Innovation::NegBinomial, 0.8, 0.6};
  const std::vector<int> x = simulate(m, 120, 150, rng);

  double want = 0.0;
  for (size_t t = 2; t < x.size(); ++t) {
    const std::vector<int> lags = {x[t - 1], x[t - 2]};
    want += std::log(std::max(transition_prob_conv(m, x[t], lags), kProbFloor));
  }
  CHECK(cml_loglik(x, m, TransitionMethod::Exact) == Approx(want).epsilon(1e-13));

  const QuadratureRule rule = inversion_rule();
  const double davies = cml_loglik(x, m, TransitionMethod::Davies, &rule);
  CHECK(davies == Approx(want).epsilon(1e-8));
}

TEST_CASE("cml recovers parameters on a long realization") {
  RandomStream rng = make_stream(106, {1});
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<int> x = simulate(m, 3000, 300, rng);
  FamilySpec fam;
  const FitResult f = fit_cml(x, 1, fam);
  CHECK(f.converged);
  CHECK(f.theta[0] == Approx(0.5).epsilon(0.1));
  CHECK(f.theta[1] == Approx(1.0).epsilon(0.12));
  CHECK(f.n_used == 2999);

  // the fitted point cannot score worse than the truth
  const double at_hat = *f.objective;
  const double at_truth = cml_loglik(x, m, TransitionMethod::Exact);
  CHECK(at_hat >= at_truth - 1e-6);
}

TEST_CASE("cml with the same start is deterministic") {
  RandomStream rng = make_stream(106, {2});
  const GinarModel m = po1(0.4, 1.5);
  const std::vector<int> x = simulate(m, 400, 200, rng);
  FamilySpec fam;
  FitOptions opt;
  opt.init = std::vector<double>{0.3, 1.0};
  const FitResult a = fit_cml(x, 1, fam, opt);
  const FitResult b = fit_cml(x, 1, fam, opt);
  CHECK(a.theta == b.theta);
  CHECK(*a.objective == *b.objective);
}

TEST_CASE("exact and inverted transition routes give the same fit") {
  RandomStream rng = make_stream(106, {3});
  GinarModel m;
  m.alpha = {0.3, 0.25};
  m.innovation = {Innovation::Poisson, 1.0, 0.0};
  const std::vector<int> x = simulate(m, 200, 200, rng);
  FamilySpec fam;
  FitOptions oe, od;
  oe.transition = TransitionMethod::Exact;
  od.transition = TransitionMethod::Davies;
  oe.init = std::vector<double>{0.25, 0.2, 0.9};
  od.init = oe.init;
  const FitResult fe = fit_cml(x, 2, fam, oe);
  const FitResult fd = fit_cml(x, 2, fam, od);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(fe.theta[j] - fd.theta[j]) < 1e-5);
}

TEST_CASE("cml on an independent series pushes alpha to the boundary") {
  RandomStream rng = make_stream(106, {4});
  GinarModel m;
  m.alpha = {0.0};
  m.innovation = {Innovation::Poisson, 2.0, 0.0};
  const std::vector<int> x = simulate(m, 3000, 100, rng);
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= x.size();

  FamilySpec fam;
  const FitResult f = fit_cml(x, 1, fam);
  CHECK(f.theta[0] < 0.05);
  const double mean_hat = f.theta[1] / (1.0 - f.theta[0]);
  CHECK(std::abs(mean_hat - xbar) < 3.0 * std::sqrt(xbar / x.size()) + 0.02);
}

TEST_CASE("nb innovation dispersion is recovered by cml") {
  RandomStream rng = make_stream(106, {5});
  GinarModel m = po1(0.5, 1.0);
  m.innovation = {Innovation::NegBinomial, 1.0, 1.0};
  const std::vector<int> x = simulate(m, 3000, 300, rng);
  FamilySpec fam;
  fam.innovation = Innovation::NegBinomial;
  const FitResult f = fit_cml(x, 1, fam);
  CHECK(f.theta[0] == Approx(0.5).epsilon(0.12));
  CHECK(f.theta[1] == Approx(1.0).epsilon(0.15));
  CHECK(std::abs(f.theta[2] - 1.0) < 0.4);
}

TEST_CASE("geometric thinning model is recovered by cml") {
  RandomStream rng = make_stream(106, {6});
  GinarModel m;
  m.alpha = {0.4};
  m.thinning.family = Thinning::NegBinomial;
  m.innovation = {Innovation::Poisson, 1.2, 0.0};
  const std::vector<int> x = simulate(m, 3000, 300, rng);
  const FamilySpec fam = *parse_family("geom-inar");
  const FitResult f = fit_cml(x, 1, fam);
  CHECK(f.theta[0] == Approx(0.4).epsilon(0.15));
  CHECK(f.theta[1] == Approx(1.2).epsilon(0.15));
}

TEST_CASE("pseudo likelihood recovers parameters") {
  RandomStream rng = make_stream(107, {1});
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<int> x = simulate(m, 3000, 300, rng);
  FamilySpec fam;
  const FitResult f = fit_pseudo(x, 1, fam);
  CHECK(f.converged);
  CHECK(f.theta[0] == Approx(0.5).epsilon(0.1));
  CHECK(f.theta[1] == Approx(1.0).epsilon(0.12));
}

TEST_CASE("whittle recovers the dependence and the mean relation") {
  RandomStream rng = make_stream(108, {1});
  GinarModel m;
  m.alpha = {0.45, 0.2};
  m.innovation = {Innovation::Poisson, 0.9, 0.0};
  const std::vector<int> x = simulate(m, 4000, 300, rng);
  FamilySpec fam;
  const FitResult f = fit_whittle(x, 2, fam);
  CHECK(f.theta[0] == Approx(0.45).epsilon(0.2));
  CHECK(f.theta[1] == Approx(0.2).epsilon(0.4));
  double xbar = 0.0;
  for (int v : x) xbar += v;
  xbar /= x.size();
  CHECK(f.theta[2] == Approx((1.0 - f.theta[0] - f.theta[1]) * xbar).epsilon(1e-12));
  CHECK(f.n_used == 4000);
}

TEST_CASE("saddlepoint fit works only with binomial thinning and tracks cml") {
  RandomStream rng = make_stream(109, {1});
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<int> x = simulate(m, 2000, 300, rng);
  FamilySpec fam;
  const FitResult f = fit_saddlepoint(x, 1, fam);
  CHECK(f.converged);
  CHECK(std::abs(f.theta[0] - 0.5) < 0.09);
  CHECK(std::abs(f.theta[1] - 1.0) < 0.2);

  const FamilySpec geom = *parse_family("geom-inar");
  CHECK_THROWS_AS(fit_saddlepoint(x, 1, geom), std::invalid_argument);
}

TEST_CASE("yule-walker and cls agree on long series") {
  RandomStream rng = make_stream(110, {1});
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<int> x = simulate(m, 10000, 300, rng);
  FamilySpec fam;
  const FitResult a = fit_yw(x, 1, fam);
  const FitResult b = fit_cls(x, 1, fam);
  CHECK(std::abs(a.theta[0] - b.theta[0]) < 0.01);
  CHECK(std::abs(a.theta[1] - b.theta[1]) < 0.03);
}

TEST_CASE("errors shrink as the sample grows") {
  FamilySpec fam;
  const GinarModel m = po1(0.5, 1.0);
  const std::vector<Method> methods = {Method::Cml, Method::YuleWalker, Method::Cls,
                                       Method::Pseudo, Method::Whittle};
  const int reps = 40;
  for (Method method : methods) {
    std::vector<double> small, big;
    for (int r = 0; r < reps; ++r) {
      RandomStream rs = make_stream(111, {static_cast<std::uint64_t>(r), 100});
      RandomStream rb = make_stream(111, {static_cast<std::uint64_t>(r), 1000});
      const std::vector<int> xs = simulate(m, 100, 200, rs);
      const std::vector<int> xb = simulate(m, 1000, 200, rb);
      small.push_back(fit_series(xs, 1, fam, method).theta[0]);
      big.push_back(fit_series(xb, 1, fam, method).theta[0]);
    }
    CHECK(rmse_alpha(big, 0.5) < rmse_alpha(small, 0.5));
  }
}

TEST_CASE("seasonal fit recovers the log-linear mean path") {
  RandomStream rng = make_stream(112, {1});
  GinarModel m = po1(0.4, 1.0);
  const SeasonalMean s{0.3, 0.5, -0.3, 12};
  const std::vector<int> x = simulate_seasonal(m, s, 1500, 200, rng);
  FamilySpec fam;
  const FitResult f = fit_cml_seasonal(x, 1, fam, 12);
  REQUIRE(f.seasonal.has_value());
  CHECK(f.names == std::vector<std::string>{"alpha1", "b0", "b1", "b2"});
  CHECK(std::abs(f.theta[0] - 0.4) < 0.08);
  CHECK(std::abs(f.theta[1] - 0.3) < 0.15);
  CHECK(std::abs(f.theta[2] - 0.5) < 0.15);
  CHECK(std::abs(f.theta[3] + 0.3) < 0.15);
  CHECK(f.seasonal->period == 12);

  const GinarModel back = fit_model(f);
  CHECK(back.innovation.mu == Approx(std::exp(f.theta[1])));
}

TEST_CASE("names families and dispatch stay consistent") {
  CHECK(method_name(Method::Cml) == "cml");
  CHECK(parse_method("whittle").value() == Method::Whittle);
  CHECK_FALSE(parse_method("nope").has_value());
  for (const char* tok : {"po-inar", "nb-inar", "geom-inar"}) {
    const auto fam = parse_family(tok);
    REQUIRE(fam.has_value());
    CHECK(family_name(*fam) == tok);
  }
  CHECK_FALSE(parse_family("inar").has_value());

  FamilySpec nb;
  nb.innovation = Innovation::NegBinomial;
  CHECK(theta_dim(nb, 2) == 4);
  CHECK(theta_names(nb, 2) ==
        std::vector<std::string>{"alpha1", "alpha2", "mu_eps", "r"});
  CHECK_THROWS_AS(make_model(nb, 2, std::vector<double>{0.1, 0.2, 1.0}),
                  std::invalid_argument);

  RandomStream rng = make_stream(113, {1});
  const GinarModel m = po1(0.4, 1.0);
  const std::vector<int> x = simulate(m, 200, 100, rng);
  FamilySpec fam;
  const FitResult a = fit_series(x, 1, fam, Method::YuleWalker);
  const FitResult b = fit_yw(x, 1, fam);
  CHECK(a.theta == b.theta);
  CHECK(a.method == Method::YuleWalker);
}

TEST_CASE("input validation rejects bad series") {
  FamilySpec fam;
  std::vector<int> tiny = {1, 2, 1};
  CHECK_THROWS_AS(fit_yw(tiny, 1, fam), std::invalid_argument);
  std::vector<int> neg = {1, 2, -1, 2, 1, 2, 0, 1, 3, 2, 1, 0, 2};
  CHECK_THROWS_AS(fit_cls(neg, 1, fam), std::invalid_argument);
  std::vector<int> flat(50, 3);
  CHECK_THROWS_AS(fit_yw(flat, 1, fam), std::runtime_error);
}

}  // TEST_SUITE

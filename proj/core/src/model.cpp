#include "ginar/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ginar {

namespace {

double alpha_sum(const GinarModel& m) {
  return std::accumulate(m.alpha.begin(), m.alpha.end(), 0.0);
}

double beta_sum(const GinarModel& m) {
  double s = 0.0;
  for (double a : m.alpha) s += variance_coeff(m.thinning, a);
  return s;
}

void check_lags(const GinarModel& m, std::span<const int> lags) {
  if (static_cast<int>(lags.size()) != m.order())
    throw std::invalid_argument("model: lag window must have length p");
  for (int v : lags)
    if (v < 0) throw std::invalid_argument("model: lag values must be nonnegative");
}

}  // namespace

void validate_model(const GinarModel& model) {
  if (model.alpha.empty())
    throw std::invalid_argument("model: order p must be at least 1");
  for (double a : model.alpha) validate(model.thinning, a);
  if (!(alpha_sum(model) < 1.0))
    throw std::invalid_argument("model: sum of alpha must be below 1");
  validate(model.innovation);
}

std::vector<int> simulate(const GinarModel& model, int n, int burnin,
                          RandomStream& rng) {
  validate_model(model);
  if (n < 0 || burnin < 0)
    throw std::invalid_argument("model: n and burnin must be nonnegative");
  const int p = model.order();
  std::vector<int> buf;
  buf.reserve(p + burnin + n);
  for (int i = 0; i < p; ++i) buf.push_back(sample_innovation(model.innovation, rng));
  for (int t = 0; t < burnin + n; ++t) {
    int x = sample_innovation(model.innovation, rng);
    const int cur = static_cast<int>(buf.size());
    for (int j = 1; j <= p; ++j)
      x += thin(model.thinning, model.alpha[j - 1], buf[cur - j], rng);
    buf.push_back(x);
  }
  return std::vector<int>(buf.end() - n, buf.end());
}

double conditional_mean(const GinarModel& model, std::span<const int> lags) {
  validate_model(model);
  check_lags(model, lags);
  double m = model.innovation.mu;
  for (int j = 0; j < model.order(); ++j) m += model.alpha[j] * lags[j];
  return m;
}

double conditional_variance(const GinarModel& model, std::span<const int> lags) {
  validate_model(model);
  check_lags(model, lags);
  double v = innovation_variance(model.innovation);
  for (int j = 0; j < model.order(); ++j)
    v += variance_coeff(model.thinning, model.alpha[j]) * lags[j];
  return v;
}

double marginal_mean(const GinarModel& model) {
  validate_model(model);
  return model.innovation.mu / (1.0 - alpha_sum(model));
}

std::vector<double> acf(const GinarModel& model, int max_lag) {
  validate_model(model);
  if (max_lag < 0) throw std::invalid_argument("model: max_lag must be nonnegative");
  const int p = model.order();
  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  if (max_lag == 0) return rho;

  // rho(k) = sum_j alpha_j rho(|k-j|) for k = 1..p, as a linear system in
  // rho(1..p).
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd b(p);
  for (int k = 1; k <= p; ++k) {
    b(k - 1) = 0.0;
    for (int j = 1; j <= p; ++j) {
      const int m = std::abs(k - j);
      if (m == 0)
        b(k - 1) += model.alpha[j - 1];
      else
        A(k - 1, m - 1) -= model.alpha[j - 1];
    }
  }
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  for (int k = 1; k <= std::min(p, max_lag); ++k) rho[k] = x(k - 1);
  for (int k = p + 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (int j = 1; j <= p; ++j) s += model.alpha[j - 1] * rho[k - j];
    rho[k] = s;
  }
  return rho;
}

double marginal_variance(const GinarModel& model) {
  validate_model(model);
  const int p = model.order();
  const std::vector<double> rho = acf(model, p);
  double denom = 1.0;
  for (int j = 1; j <= p; ++j) denom -= model.alpha[j - 1] * rho[j];
  const double num =
      beta_sum(model) * marginal_mean(model) + innovation_variance(model.innovation);
  return num / denom;
}

double spectral_density(const GinarModel& model, double nu) {
  validate_model(model);
  std::complex<double> poly = 1.0;
  for (int j = 1; j <= model.order(); ++j)
    poly -= model.alpha[j - 1] * std::polar(1.0, -nu * j);
  const double c =
      innovation_variance(model.innovation) + marginal_mean(model) * beta_sum(model);
  return c / (2.0 * std::numbers::pi * std::norm(poly));
}

double seasonal_mu(const SeasonalMean& s, long t) {
  if (s.period <= 0) throw std::invalid_argument("model: seasonal period must be positive");
  const double w = 2.0 * std::numbers::pi * static_cast<double>(t) / s.period;
  return std::exp(s.b0 + s.b1 * std::sin(w) + s.b2 * std::cos(w));
}

std::vector<int> simulate_seasonal(const GinarModel& model, const SeasonalMean& s,
                                   int n, int burnin, RandomStream& rng) {
  validate_model(model);
  if (n < 0 || burnin < 0)
    throw std::invalid_argument("model: n and burnin must be nonnegative");
  const int p = model.order();
  std::vector<int> buf;
  buf.reserve(p + burnin + n);
  long t = 1 - burnin - p;
  for (int i = 0; i < p; ++i, ++t)
    buf.push_back(sample_innovation(model.innovation.with_mean(seasonal_mu(s, t)), rng));
  for (; t <= n; ++t) {
    int x = sample_innovation(model.innovation.with_mean(seasonal_mu(s, t)), rng);
    const int cur = static_cast<int>(buf.size());
    for (int j = 1; j <= p; ++j)
      x += thin(model.thinning, model.alpha[j - 1], buf[cur - j], rng);
    buf.push_back(x);
  }
  return std::vector<int>(buf.end() - n, buf.end());
}

}  // namespace ginar

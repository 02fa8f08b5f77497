#ifndef GINAR_MODEL_HPP
#define GINAR_MODEL_HPP

#include <span>
#include <vector>

#include "ginar/innovations.hpp"
#include "ginar/rng.hpp"
#include "ginar/thinning.hpp"

namespace ginar {

/// GINAR(p) process
///   X_t = sum_{j=1}^p alpha_j o X_{t-j} + eps_t
/// with one thinning family shared across lags and iid innovations.
/// Stationarity requires alpha_j in [0,1) and sum_j alpha_j < 1.
///
/// Lag windows are passed newest first: lags[0] = x_{t-1}, ...,
/// lags[p-1] = x_{t-p}.
struct GinarModel {
  std::vector<double> alpha;
  ThinningSpec thinning;
  InnovationSpec innovation;

  int order() const { return static_cast<int>(alpha.size()); }
};

/// Throws std::invalid_argument on constraint violations.
void validate_model(const GinarModel& model);

/// Simulates n observations after discarding `burnin` warm-up steps.
/// The recursion starts from p innovation draws.
std::vector<int> simulate(const GinarModel& model, int n, int burnin,
                          RandomStream& rng);

/// E[X_t | past] = sum_j alpha_j x_{t-j} + mu_eps.
double conditional_mean(const GinarModel& model, std::span<const int> lags);

/// Var[X_t | past] = sum_j beta_j x_{t-j} + sigma2_eps.
double conditional_variance(const GinarModel& model, std::span<const int> lags);

/// mu_X = mu_eps / (1 - sum_j alpha_j).
double marginal_mean(const GinarModel& model);

/// var(X) = (sum_j beta_j mu_X + sigma2_eps) / (1 - sum_j alpha_j rho(j)).
double marginal_variance(const GinarModel& model);

/// Autocorrelations rho(0..max_lag); rho(1..p) solve the order-p
/// Yule-Walker system, later lags follow the AR recursion.
std::vector<double> acf(const GinarModel& model, int max_lag);

/// f(nu) = (sigma2_eps + mu_X sum_j beta_j) / (2 pi |1 - sum_j alpha_j e^{-i nu j}|^2).
/// Integrates to var(X) over (-pi, pi].
double spectral_density(const GinarModel& model, double nu);

/// Log-linear seasonal innovation mean
///   mu_t = exp(b0 + b1 sin(2 pi t / period) + b2 cos(2 pi t / period)).
struct SeasonalMean {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  int period = 12;
};

double seasonal_mu(const SeasonalMean& s, long t);

/// Seasonal variant of simulate(); the retained block is indexed t = 1..n
/// and warm-up steps use the matching earlier indices.
std::vector<int> simulate_seasonal(const GinarModel& model, const SeasonalMean& s,
                                   int n, int burnin, RandomStream& rng);

}  // namespace ginar

#endif

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "ginar/estimation.hpp"

namespace ginar {

enum class CovSource { Observed, Sandwich, Bootstrap };

// matrix is the asymptotic covariance of sqrt(n) (theta_hat - theta);
// se[j] = sqrt(matrix(j,j) / n_used) is the standard error of theta_hat[j].
struct CovarianceEstimate {
  CovSource source = CovSource::Observed;
  Eigen::MatrixXd matrix;
  int n_used = 0;
  int replicates = 0;
  std::vector<double> se;
};

// Observed-information or sandwich covariance at the fitted point. The fit
// must come from the conditional likelihood (Method::Cml) and lie in the
// parameter interior.
CovarianceEstimate cml_covariance(std::span<const int> x, const FitResult& fit,
                                  CovSource source, const FitOptions& options = {});

// Parametric bootstrap: simulate from the fitted model and refit with the
// same method. Replicate b uses the stream derived from (seed, b). More than
// 10% failed refits raises an error; failures are excluded otherwise.
CovarianceEstimate bootstrap_covariance(std::span<const int> x, const FitResult& fit,
                                        int replicates, std::uint64_t seed,
                                        const FitOptions& options = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-coordinate normal intervals theta_hat[j] -+ z * se[j].
std::vector<Interval> confidence_intervals(const FitResult& fit,
                                           const CovarianceEstimate& cov,
                                           double level);

// Elliptical region test: n (theta_hat - theta0)' Sigma^-1 (theta_hat - theta0)
// against the chi-squared quantile with dim degrees of freedom.
bool region_contains(const FitResult& fit, const CovarianceEstimate& cov,
                     std::span<const double> theta0, double level);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
  double loglik = 0.0;
  int k = 0;
  int n_used = 0;
};

// Defined only for fits whose objective is a log likelihood
// (cml, cml_seasonal, pseudo, saddle).
InformationCriteria information_criteria(const FitResult& fit);

// (x_t - E[X_t | past]) / sd(X_t | past) for t > p.
std::vector<double> pearson_residuals(std::span<const int> x, const GinarModel& model);
std::vector<double> pearson_residuals(std::span<const int> x, const FitResult& fit);

struct LjungBox {
  double statistic = 0.0;
  double p_value = 1.0;
  int lags = 0;
};

LjungBox ljung_box(std::span<const double> resid, int lags = 20);

}  // namespace ginar

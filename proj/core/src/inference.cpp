#include "ginar/inference.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

#include "ginar/rng.hpp"

namespace ginar {

namespace {

std::vector<double> se_from_matrix(const Eigen::MatrixXd& sigma, int n) {
  std::vector<double> se(sigma.rows());
  for (int j = 0; j < sigma.rows(); ++j) {
    if (!(sigma(j, j) >= 0.0))
      throw std::runtime_error("inference: covariance has a negative diagonal");
    se[j] = std::sqrt(sigma(j, j) / n);
  }
  return se;
}

}  // namespace

CovarianceEstimate cml_covariance(std::span<const int> x, const FitResult& fit,
                                  CovSource source, const FitOptions& options) {
  if (fit.method != Method::Cml)
    throw std::invalid_argument("inference: likelihood covariance needs a cml fit");
  if (source == CovSource::Bootstrap)
    throw std::invalid_argument("inference: use bootstrap_covariance for the bootstrap");
  const ScoreHessian sh = cml_score_hessian(x, fit.family, fit.p, fit.theta, options);
  const int dim = static_cast<int>(fit.theta.size());
  const int n = fit.n_used;

  const Eigen::MatrixXd info = -sh.hessian;  // total, not per observation
  const Eigen::MatrixXd info_inv =
      info.partialPivLu().solve(Eigen::MatrixXd::Identity(dim, dim));

  CovarianceEstimate out;
  out.source = source;
  out.n_used = n;
  if (source == CovSource::Observed) {
    out.matrix = n * info_inv;
  } else {
    const Eigen::MatrixXd a_inv = n * info_inv;  // (info/n)^-1
    const Eigen::MatrixXd b = sh.obs_scores.transpose() * sh.obs_scores / n;
    out.matrix = a_inv * b * a_inv;
  }
  out.se = se_from_matrix(out.matrix, n);
  return out;
}

CovarianceEstimate bootstrap_covariance(std::span<const int> x, const FitResult& fit,
                                        int replicates, std::uint64_t seed,
                                        const FitOptions& options) {
  if (replicates < 2)
    throw std::invalid_argument("inference: bootstrap needs at least two replicates");
  if (fit.method == Method::CmlSeasonal)
    throw std::invalid_argument("inference: bootstrap covariance has no seasonal variant");
  const GinarModel generator = fit_model(fit);
  const int n = static_cast<int>(x.size());
  const int dim = static_cast<int>(fit.theta.size());

  std::vector<std::vector<double>> draws;
  int failures = 0;
  for (int b = 0; b < replicates; ++b) {
    RandomStream rng = make_stream(seed, {static_cast<std::uint64_t>(b)});
    try {
      const std::vector<int> xb = simulate(generator, n, 200, rng);
      const FitResult fb = fit_series(xb, fit.p, fit.family, fit.method, options);
      if (static_cast<int>(fb.theta.size()) != dim)
        throw std::runtime_error("inference: bootstrap refit dimension mismatch");
      draws.push_back(fb.theta);
    } catch (const std::exception&) {
      ++failures;
    }
  }
  if (failures * 10 > replicates)
    throw std::runtime_error("inference: more than 10% of bootstrap refits failed");

  const int used = static_cast<int>(draws.size());
  Eigen::MatrixXd D(used, dim);
  for (int b = 0; b < used; ++b)
    for (int j = 0; j < dim; ++j) D(b, j) = draws[b][j];
  const Eigen::RowVectorXd mean = D.colwise().mean();
  D.rowwise() -= mean;

  CovarianceEstimate out;
  out.source = CovSource::Bootstrap;
  out.n_used = fit.n_used;
  out.replicates = used;
  out.matrix = fit.n_used * (D.transpose() * D) / (used - 1);
  out.se = se_from_matrix(out.matrix, fit.n_used);
  return out;
}

std::vector<Interval> confidence_intervals(const FitResult& fit,
                                           const CovarianceEstimate& cov,
                                           double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("inference: level must lie in (0, 1)");
  if (cov.se.size() != fit.theta.size())
    throw std::invalid_argument("inference: covariance does not match the fit");
  const boost::math::normal_distribution<double> norm;
  const double z = boost::math::quantile(norm, 0.5 * (1.0 + level));
  std::vector<Interval> out(fit.theta.size());
  for (size_t j = 0; j < fit.theta.size(); ++j) {
    out[j].lo = fit.theta[j] - z * cov.se[j];
    out[j].hi = fit.theta[j] + z * cov.se[j];
  }
  return out;
}

bool region_contains(const FitResult& fit, const CovarianceEstimate& cov,
                     std::span<const double> theta0, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("inference: level must lie in (0, 1)");
  const int dim = static_cast<int>(fit.theta.size());
  if (static_cast<int>(theta0.size()) != dim)
    throw std::invalid_argument("inference: reference point has the wrong length");
  Eigen::VectorXd d(dim);
  for (int j = 0; j < dim; ++j) d(j) = fit.theta[j] - theta0[j];
  const Eigen::VectorXd w = cov.matrix.partialPivLu().solve(d);
  const double q = cov.n_used * d.dot(w);
  const boost::math::chi_squared_distribution<double> chi2(dim);
  return q <= boost::math::quantile(chi2, level);
}

InformationCriteria information_criteria(const FitResult& fit) {
  switch (fit.method) {
    case Method::Cml:
    case Method::CmlSeasonal:
    case Method::Pseudo:
    case Method::Saddlepoint:
      break;
    default:
      throw std::invalid_argument(
          "inference: information criteria need a likelihood-based fit");
  }
  if (!fit.objective)
    throw std::invalid_argument("inference: fit carries no objective value");
  InformationCriteria out;
  out.loglik = *fit.objective;
  out.k = static_cast<int>(fit.theta.size());
  out.n_used = fit.n_used;
  out.aic = -2.0 * out.loglik + 2.0 * out.k;
  out.bic = -2.0 * out.loglik + out.k * std::log(static_cast<double>(out.n_used));
  return out;
}

std::vector<double> pearson_residuals(std::span<const int> x, const GinarModel& model) {
  const int p = model.order();
  const int n = static_cast<int>(x.size());
  if (n <= p) throw std::invalid_argument("inference: series too short for residuals");
  std::vector<double> out;
  out.reserve(n - p);
  std::vector<int> lags(p);
  for (int t = p; t < n; ++t) {
    for (int j = 0; j < p; ++j) lags[j] = x[t - 1 - j];
    const double m = conditional_mean(model, lags);
    const double v = conditional_variance(model, lags);
    out.push_back((x[t] - m) / std::sqrt(v));
  }
  return out;
}

std::vector<double> pearson_residuals(std::span<const int> x, const FitResult& fit) {
  const GinarModel model = fit_model(fit);
  if (!fit.seasonal) return pearson_residuals(x, model);

  const SeasonalMean& s = *fit.seasonal;
  const int p = fit.p;
  const int n = static_cast<int>(x.size());
  if (n <= p) throw std::invalid_argument("inference: series too short for residuals");
  std::vector<double> out;
  out.reserve(n - p);
  for (int t = p; t < n; ++t) {
    const double mu_t = seasonal_mu(s, t + 1);
    const InnovationSpec eps = model.innovation.with_mean(mu_t);
    double m = mu_t, v = innovation_variance(eps);
    for (int j = 0; j < p; ++j) {
      m += model.alpha[j] * x[t - 1 - j];
      v += variance_coeff(model.thinning, model.alpha[j]) * x[t - 1 - j];
    }
    out.push_back((x[t] - m) / std::sqrt(v));
  }
  return out;
}

LjungBox ljung_box(std::span<const double> resid, int lags) {
  const int n = static_cast<int>(resid.size());
  if (lags < 1 || lags >= n)
    throw std::invalid_argument("inference: lag count must lie in [1, n)");
  double mean = 0.0;
  for (double e : resid) mean += e;
  mean /= n;
  double denom = 0.0;
  for (double e : resid) denom += (e - mean) * (e - mean);
  if (!(denom > 0.0)) throw std::runtime_error("inference: residuals are constant");

  double q = 0.0;
  for (int k = 1; k <= lags; ++k) {
    double num = 0.0;
    for (int t = 0; t + k < n; ++t) num += (resid[t] - mean) * (resid[t + k] - mean);
    const double rho = num / denom;
    q += rho * rho / (n - k);
  }
  q *= n * (n + 2.0);

  LjungBox out;
  out.statistic = q;
  out.lags = lags;
  const boost::math::chi_squared_distribution<double> chi2(lags);
  out.p_value = 1.0 - boost::math::cdf(chi2, q);
  return out;
}

}  // namespace ginar

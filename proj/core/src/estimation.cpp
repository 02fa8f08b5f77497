#include "ginar/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ginar/optimize.hpp"

namespace ginar {

namespace {

constexpr double kSigmaFloor = 1e-8;

double mean_of(std::span<const int> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// beta(alpha) without the [0,1) validation; yw/cls can land outside.
double beta_raw(const ThinningSpec& s, double a) {
  switch (s.family) {
    case Thinning::Binomial: return a * (1.0 - a);
    case Thinning::NegBinomial: return a * (1.0 + a);
    case Thinning::RhoBinomial: return a * (1.0 + 2.0 * s.rho - a);
  }
  throw std::logic_error("estimation: unknown thinning family");
}

double innovation_variance_raw(const FamilySpec& f, double mu, double r) {
  switch (f.innovation) {
    case Innovation::Poisson: return mu;
    case Innovation::NegBinomial: return mu + r * mu * mu;
    case Innovation::Geometric: return mu * (1.0 + mu);
  }
  throw std::logic_error("estimation: unknown innovation family");
}

void check_series(std::span<const int> x, int p, int dim) {
  if (p < 1) throw std::invalid_argument("estimation: order p must be at least 1");
  for (int v : x)
    if (v < 0) throw std::invalid_argument("estimation: series must be nonnegative");
  if (static_cast<int>(x.size()) < p + dim + 2)
    throw std::invalid_argument("estimation: series too short for the requested model");
}

bool has_r(const FamilySpec& f) { return f.innovation == Innovation::NegBinomial; }

InnovationSpec innovation_of(const FamilySpec& f, double mu, double r) {
  return InnovationSpec{f.innovation, mu, has_r(f) ? r : 0.0};
}

// ---- transformed parametrization ------------------------------------------

std::vector<double> theta_to_real(const FamilySpec& f, int p, std::span<const double> theta) {
  std::vector<double> z = simplex_to_real(theta.subspan(0, p));
  z.push_back(std::log(theta[p]));
  if (has_r(f)) z.push_back(std::log(std::max(theta[p + 1], 1e-8)));
  return z;
}

std::vector<double> real_to_theta(const FamilySpec& f, int p, std::span<const double> z) {
  std::vector<double> theta = simplex_from_real(z.subspan(0, p));
  theta.push_back(std::exp(z[p]));
  if (has_r(f)) theta.push_back(std::exp(z[p + 1]));
  return theta;
}

// Interior starting point from Yule-Walker moments.
std::vector<double> interior_init(std::span<const int> x, int p, const FamilySpec& f);

// ---- shared likelihood loops -----------------------------------------------

// lags scratch holds x_{t-1}, ..., x_{t-p} (newest first).
void fill_window(std::span<const int> x, int t, int p, std::vector<int>& lags) {
  for (int j = 0; j < p; ++j) lags[j] = x[t - 1 - j];
}

double table_loglik(std::span<const int> x, TransitionTable& table, int p) {
  const int n = static_cast<int>(x.size());
  std::vector<int> lags(p);
  double ll = 0.0;
  for (int t = p; t < n; ++t) {
    fill_window(x, t, p, lags);
    ll += table.log_prob(x[t], lags);
  }
  return ll;
}

double table_loglik_seasonal(std::span<const int> x, TransitionTable& table, int p,
                             const SeasonalMean& s) {
  const int n = static_cast<int>(x.size());
  std::vector<int> lags(p);
  double ll = 0.0;
  for (int t = p; t < n; ++t) {
    fill_window(x, t, p, lags);
    ll += table.log_prob_at_mean(x[t], lags, seasonal_mu(s, t + 1));
  }
  return ll;
}

int series_max(std::span<const int> x) {
  int m = 0;
  for (int v : x) m = std::max(m, v);
  return m;
}

}  // namespace

// ---- names, families, parameter vectors ------------------------------------

std::string method_name(Method m) {
  switch (m) {
    case Method::Cml: return "cml";
    case Method::YuleWalker: return "yw";
    case Method::Cls: return "cls";
    case Method::Pseudo: return "pseudo";
    case Method::Whittle: return "whittle";
    case Method::Saddlepoint: return "saddle";
    case Method::CmlSeasonal: return "cml_seasonal";
  }
  throw std::logic_error("estimation: unknown method");
}

std::optional<Method> parse_method(const std::string& token) {
  if (token == "cml") return Method::Cml;
  if (token == "yw") return Method::YuleWalker;
  if (token == "cls") return Method::Cls;
  if (token == "pseudo") return Method::Pseudo;
  if (token == "whittle") return Method::Whittle;
  if (token == "saddle") return Method::Saddlepoint;
  if (token == "cml_seasonal") return Method::CmlSeasonal;
  return std::nullopt;
}

std::optional<FamilySpec> parse_family(const std::string& token) {
  FamilySpec f;
  if (token == "po-inar") {
    f.thinning.family = Thinning::Binomial;
    f.innovation = Innovation::Poisson;
    return f;
  }
  if (token == "nb-inar") {
    f.thinning.family = Thinning::Binomial;
    f.innovation = Innovation::NegBinomial;
    return f;
  }
  if (token == "geom-inar") {
    f.thinning.family = Thinning::NegBinomial;
    f.innovation = Innovation::Poisson;
    return f;
  }
  return std::nullopt;
}

std::string family_name(const FamilySpec& f) {
  if (f.thinning.family == Thinning::Binomial && f.innovation == Innovation::Poisson)
    return "po-inar";
  if (f.thinning.family == Thinning::Binomial && f.innovation == Innovation::NegBinomial)
    return "nb-inar";
  if (f.thinning.family == Thinning::NegBinomial && f.innovation == Innovation::Poisson)
    return "geom-inar";
  return "custom";
}

int theta_dim(const FamilySpec& f, int p) { return p + 1 + (has_r(f) ? 1 : 0); }

std::vector<std::string> theta_names(const FamilySpec& f, int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("alpha" + std::to_string(j));
  names.push_back("mu_eps");
  if (has_r(f)) names.push_back("r");
  return names;
}

GinarModel make_model(const FamilySpec& f, int p, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != theta_dim(f, p))
    throw std::invalid_argument("estimation: parameter vector has the wrong length");
  GinarModel m;
  m.alpha.assign(theta.begin(), theta.begin() + p);
  m.thinning = f.thinning;
  m.innovation = innovation_of(f, theta[p], has_r(f) ? theta[p + 1] : 0.0);
  validate_model(m);
  return m;
}

std::vector<double> simplex_from_real(std::span<const double> z) {
  double zmax = 0.0;
  for (double v : z) zmax = std::max(zmax, v);
  double denom = std::exp(-zmax);
  for (double v : z) denom += std::exp(v - zmax);
  std::vector<double> alpha(z.size());
  for (size_t j = 0; j < z.size(); ++j) alpha[j] = std::exp(z[j] - zmax) / denom;
  return alpha;
}

std::vector<double> simplex_to_real(std::span<const double> alpha) {
  double rest = 1.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("estimation: alpha must be interior");
    rest -= a;
  }
  if (!(rest > 0.0)) throw std::invalid_argument("estimation: alpha must be interior");
  std::vector<double> z(alpha.size());
  for (size_t j = 0; j < alpha.size(); ++j) z[j] = std::log(alpha[j] / rest);
  return z;
}

GinarModel fit_model(const FitResult& fit) {
  const int p = fit.p;
  std::vector<double> theta(fit.theta.begin(), fit.theta.begin() + p);
  if (fit.seasonal) {
    theta.push_back(std::exp(fit.theta[p]));  // b0 slot
    if (has_r(fit.family)) theta.push_back(fit.theta[p + 3]);
  } else {
    theta.insert(theta.end(), fit.theta.begin() + p, fit.theta.end());
  }
  // clamp into the interior if needed
  double asum = 0.0;
  for (int j = 0; j < p; ++j) {
    theta[j] = std::max(theta[j], 0.0);
    asum += theta[j];
  }
  if (asum >= 1.0 - 1e-3) {
    for (int j = 0; j < p; ++j) theta[j] *= (1.0 - 1e-3) / asum;
  }
  theta[p] = std::max(theta[p], kSigmaFloor);
  if (has_r(fit.family)) theta[p + 1] = std::max(theta[p + 1], 0.0);
  return make_model(fit.family, p, theta);
}

// ---- moment statistics ------------------------------------------------------

std::vector<double> sample_acvf(std::span<const int> x, int max_lag) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("estimation: series too short");
  if (max_lag < 0 || max_lag >= n)
    throw std::invalid_argument("estimation: max_lag must lie in [0, n)");
  const double xbar = mean_of(x);
  std::vector<double> g(max_lag + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (int t = 0; t + k < n; ++t) acc += (x[t] - xbar) * (x[t + k] - xbar);
    g[k] = acc / n;
  }
  return g;
}

Periodogram periodogram(std::span<const int> x) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("estimation: series too short");
  const double xbar = mean_of(x);
  Periodogram out;
  const int m = n / 2;
  out.freq.resize(m);
  out.power.resize(m);
  for (int j = 1; j <= m; ++j) {
    const double nu = 2.0 * std::numbers::pi * j / n;
    const std::complex<double> w = std::polar(1.0, -nu);
    std::complex<double> ph = 1.0, acc = 0.0;
    for (int t = 0; t < n; ++t) {
      ph *= w;  // e^{-i nu (t+1)}
      acc += (x[t] - xbar) * ph;
    }
    out.freq[j - 1] = nu;
    out.power[j - 1] = std::norm(acc) / (2.0 * std::numbers::pi * n);
  }
  return out;
}

// ---- likelihoods ------------------------------------------------------------

double cml_loglik(std::span<const int> x, const GinarModel& model,
                  TransitionMethod method, const QuadratureRule* rule) {
  check_series(x, model.order(), 0);
  TransitionTable table(model, method, rule, series_max(x));
  return table_loglik(x, table, model.order());
}

double cml_loglik_seasonal(std::span<const int> x, const GinarModel& model,
                           const SeasonalMean& seasonal, TransitionMethod method,
                           const QuadratureRule* rule) {
  check_series(x, model.order(), 0);
  TransitionTable table(model, method, rule, series_max(x));
  return table_loglik_seasonal(x, table, model.order(), seasonal);
}

// ---- Yule-Walker ------------------------------------------------------------

namespace {

std::vector<double> interior_init(std::span<const int> x, int p, const FamilySpec& f) {
  FitResult yw;
  try {
    yw = fit_yw(x, p, f);
  } catch (const std::exception&) {
    // fall back to a bland interior point
    std::vector<double> theta(theta_dim(f, p));
    for (int j = 0; j < p; ++j) theta[j] = 0.3 / p;
    theta[p] = std::max(0.5, mean_of(x) * 0.5);
    if (has_r(f)) theta[p + 1] = 0.5;
    return theta;
  }
  std::vector<double> theta = yw.theta;
  double asum = 0.0;
  for (int j = 0; j < p; ++j) {
    theta[j] = std::min(std::max(theta[j], 0.02), 0.95);
    asum += theta[j];
  }
  if (asum > 0.95)
    for (int j = 0; j < p; ++j) theta[j] *= 0.95 / asum;
  theta[p] = std::max(theta[p], 0.05);
  if (has_r(f)) theta[p + 1] = std::min(std::max(theta[p + 1], 0.05), 50.0);
  return theta;
}

}  // namespace

FitResult fit_yw(std::span<const int> x, int p, const FamilySpec& family) {
  check_series(x, p, theta_dim(family, p));
  const int n = static_cast<int>(x.size());
  const std::vector<double> g = sample_acvf(x, p);
  if (!(g[0] > 0.0)) throw std::runtime_error("estimation: series has zero variance");

  Eigen::MatrixXd G(p, p);
  Eigen::VectorXd rhs(p);
  for (int i = 0; i < p; ++i) {
    rhs(i) = g[i + 1];
    for (int j = 0; j < p; ++j) G(i, j) = g[std::abs(i - j)];
  }
  const Eigen::VectorXd a = G.partialPivLu().solve(rhs);

  const double xbar = mean_of(x);
  double asum = 0.0, vp = g[0], bsum = 0.0;
  std::vector<double> alpha(p);
  for (int j = 0; j < p; ++j) {
    alpha[j] = a(j);
    asum += alpha[j];
    vp -= alpha[j] * g[j + 1];
    bsum += beta_raw(family.thinning, alpha[j]);
  }
  const double mu = (1.0 - asum) * xbar;
  const double sigma2 = vp - xbar * bsum;

  FitResult fit;
  fit.method = Method::YuleWalker;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = alpha;
  fit.theta.push_back(mu);
  fit.converged = true;
  fit.iterations = 0;
  fit.n_used = n;
  bool ok = mu > 0.0 && asum < 1.0;
  for (double aj : alpha) ok = ok && aj >= 0.0 && aj < 1.0;
  if (has_r(family)) {
    const double r_raw = (sigma2 - mu) / (mu * mu);
    fit.theta.push_back(std::max(r_raw, 0.0));
    ok = ok && r_raw >= 0.0;
  }
  fit.feasible = ok;
  return fit;
}

// ---- conditional least squares ----------------------------------------------

FitResult fit_cls(std::span<const int> x, int p, const FamilySpec& family) {
  check_series(x, p, theta_dim(family, p));
  const int n = static_cast<int>(x.size());
  const int m = n - p;
  Eigen::MatrixXd X(m, p + 1);
  Eigen::VectorXd y(m);
  for (int t = p; t < n; ++t) {
    const int row = t - p;
    for (int j = 0; j < p; ++j) X(row, j) = x[t - 1 - j];
    X(row, p) = 1.0;
    y(row) = x[t];
  }
  const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);

  std::vector<double> alpha(p);
  double asum = 0.0;
  for (int j = 0; j < p; ++j) {
    alpha[j] = coef(j);
    asum += alpha[j];
  }
  const double mu = coef(p);

  // two-step innovation variance from squared residuals
  double sse = 0.0, s2acc = 0.0;
  for (int t = p; t < n; ++t) {
    double mhat = mu, bterm = 0.0;
    for (int j = 0; j < p; ++j) {
      mhat += alpha[j] * x[t - 1 - j];
      bterm += beta_raw(family.thinning, alpha[j]) * x[t - 1 - j];
    }
    const double e = x[t] - mhat;
    sse += e * e;
    s2acc += e * e - bterm;
  }
  const double sigma2_raw = s2acc / m;
  const double sigma2 = std::max(sigma2_raw, kSigmaFloor);

  FitResult fit;
  fit.method = Method::Cls;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = alpha;
  fit.theta.push_back(mu);
  fit.objective = sse / m;
  fit.converged = true;
  fit.iterations = 0;
  fit.n_used = m;
  bool ok = mu > 0.0 && asum < 1.0 && sigma2_raw > 0.0;
  for (double aj : alpha) ok = ok && aj >= 0.0 && aj < 1.0;
  if (has_r(family)) {
    const double r_raw = (sigma2 - mu) / (mu * mu);
    fit.theta.push_back(std::max(r_raw, 0.0));
    ok = ok && r_raw >= 0.0;
  }
  fit.feasible = ok;
  return fit;
}

// ---- conditional maximum likelihood ------------------------------------------

FitResult fit_cml(std::span<const int> x, int p, const FamilySpec& family,
                  const FitOptions& options) {
  const int dim = theta_dim(family, p);
  check_series(x, p, dim);
  const int n = static_cast<int>(x.size());
  const int maxc = series_max(x);
  const QuadratureRule rule = inversion_rule(options.quad_nodes);
  const QuadratureRule* rp =
      options.transition == TransitionMethod::Davies ? &rule : nullptr;

  const std::vector<double> start =
      options.init ? *options.init : interior_init(x, p, family);
  const std::vector<double> z0 = theta_to_real(family, p, start);

  const Objective negll = [&](const std::vector<double>& z) {
    const std::vector<double> theta = real_to_theta(family, p, z);
    const GinarModel m = make_model(family, p, theta);
    TransitionTable table(m, options.transition, rp, maxc);
    return -table_loglik(x, table, p);
  };
  const OptimResult opt = minimize(negll, z0, options.grad_tol, options.max_iterations);

  FitResult fit;
  fit.method = Method::Cml;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = real_to_theta(family, p, opt.x);
  fit.objective = -opt.f;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.n_used = n - p;
  return fit;
}

// ---- gaussian pseudo-likelihood ----------------------------------------------

FitResult fit_pseudo(std::span<const int> x, int p, const FamilySpec& family,
                     const FitOptions& options) {
  const int dim = theta_dim(family, p);
  check_series(x, p, dim);
  const int n = static_cast<int>(x.size());

  const std::vector<double> start =
      options.init ? *options.init : interior_init(x, p, family);
  const std::vector<double> z0 = theta_to_real(family, p, start);

  const Objective negobj = [&](const std::vector<double>& z) {
    const std::vector<double> theta = real_to_theta(family, p, z);
    const double mu = theta[p];
    const double r = has_r(family) ? theta[p + 1] : 0.0;
    const double s2 = innovation_variance_raw(family, mu, r);
    double acc = 0.0;
    for (int t = p; t < n; ++t) {
      double m = mu, v = s2;
      for (int j = 0; j < p; ++j) {
        m += theta[j] * x[t - 1 - j];
        v += beta_raw(family.thinning, theta[j]) * x[t - 1 - j];
      }
      const double e = x[t] - m;
      acc += 0.5 * std::log(2.0 * std::numbers::pi * v) + e * e / (2.0 * v);
    }
    return acc;
  };
  const OptimResult opt = minimize(negobj, z0, options.grad_tol, options.max_iterations);

  FitResult fit;
  fit.method = Method::Pseudo;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = real_to_theta(family, p, opt.x);
  fit.objective = -opt.f;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.n_used = n - p;
  return fit;
}

// ---- Whittle ------------------------------------------------------------------

FitResult fit_whittle(std::span<const int> x, int p, const FamilySpec& family,
                      const FitOptions& options) {
  const int dim = theta_dim(family, p);
  check_series(x, p, dim);
  const int n = static_cast<int>(x.size());
  const Periodogram I = periodogram(x);
  const int m = static_cast<int>(I.freq.size());
  const double xbar = mean_of(x);
  if (!(xbar > 0.0)) throw std::runtime_error("estimation: series mean is zero");

  // f(nu) = c * g(nu); the scale c = sigma2_eps + mu_X sum beta_j has a
  // closed-form profile minimum c_hat = mean_j I_j / g_j.
  std::vector<double> gj(m);
  const auto profile = [&](std::span<const double> alpha) {
    for (int j = 0; j < m; ++j) {
      std::complex<double> poly = 1.0;
      for (int k = 1; k <= p; ++k) poly -= alpha[k - 1] * std::polar(1.0, -I.freq[j] * k);
      gj[j] = 1.0 / (2.0 * std::numbers::pi * std::norm(poly));
    }
    double c = 0.0;
    for (int j = 0; j < m; ++j) c += I.power[j] / gj[j];
    return c / m;
  };
  const Objective obj = [&](const std::vector<double>& z) {
    const std::vector<double> alpha = simplex_from_real(z);
    const double c = profile(alpha);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double f = c * gj[j];
      acc += std::log(f) + I.power[j] / f;
    }
    return acc / n;
  };

  std::vector<double> a0 = interior_init(x, p, family);
  a0.resize(p);
  const OptimResult opt = minimize(obj, simplex_to_real(a0), options.grad_tol,
                                   options.max_iterations);

  const std::vector<double> alpha = simplex_from_real(opt.x);
  const double c = profile(alpha);
  double asum = 0.0, bsum = 0.0;
  for (int j = 0; j < p; ++j) {
    asum += alpha[j];
    bsum += beta_raw(family.thinning, alpha[j]);
  }
  const double mu = (1.0 - asum) * xbar;
  const double sigma2 = c - xbar * bsum;

  FitResult fit;
  fit.method = Method::Whittle;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = alpha;
  fit.theta.push_back(mu);
  fit.objective = opt.f;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.n_used = n;
  bool ok = mu > 0.0;
  if (has_r(family)) {
    const double r_raw = (sigma2 - mu) / (mu * mu);
    fit.theta.push_back(std::max(r_raw, 0.0));
    ok = ok && r_raw >= 0.0;
  }
  fit.feasible = ok;
  return fit;
}

// ---- saddlepoint ----------------------------------------------------------------

namespace {

struct SaddleCgf {
  // K(u) = sum_j w_j log(1 - a_j + a_j e^u) + K_eps(u), w_j = lag counts
  std::span<const double> alpha;
  std::span<const int> lags;
  const InnovationSpec* eps;

  double d0(double u) const {
    const double eu = std::exp(u);
    double acc = innovation_cgf(*eps, u);
    for (size_t j = 0; j < alpha.size(); ++j)
      acc += lags[j] * std::log1p(alpha[j] * (eu - 1.0));
    return acc;
  }
  double d1(double u) const {
    const double eu = std::exp(u);
    double acc = innovation_cgf_d1(*eps, u);
    for (size_t j = 0; j < alpha.size(); ++j) {
      const double t = alpha[j] * eu / (1.0 - alpha[j] + alpha[j] * eu);
      acc += lags[j] * t;
    }
    return acc;
  }
  double d2(double u) const {
    const double eu = std::exp(u);
    double acc = innovation_cgf_d2(*eps, u);
    for (size_t j = 0; j < alpha.size(); ++j) {
      const double den = 1.0 - alpha[j] + alpha[j] * eu;
      const double t = alpha[j] * eu / den;
      acc += lags[j] * (t - t * t);
    }
    return acc;
  }
};

// Monotone solve of K'(u) = target on (-inf, usup).
double saddle_root(const SaddleCgf& K, double target, double usup) {
  double lo = 0.0, hi = 0.0;
  if (K.d1(0.0) < target) {
    // root to the right
    if (std::isfinite(usup)) {
      double gap = 0.5 * std::min(1.0, usup);
      hi = usup - gap;
      for (int it = 0; it < 200 && K.d1(hi) < target; ++it) {
        gap *= 0.5;
        hi = usup - gap;
      }
    } else {
      hi = 1.0;
      for (int it = 0; it < 200 && K.d1(hi) < target; ++it) hi *= 2.0;
    }
  } else {
    lo = -1.0;
    for (int it = 0; it < 200 && K.d1(lo) > target; ++it) lo *= 2.0;
    hi = 0.0;
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = K.d1(u) - target;
    if (std::abs(f) <= 1e-11 * std::max(1.0, std::abs(target))) break;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    const double fp = K.d2(u);
    double un = u - f / fp;
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    if (std::abs(un - u) < 1e-15 * std::max(1.0, std::abs(u))) {
      u = un;
      break;
    }
    u = un;
  }
  return u;
}

}  // namespace

FitResult fit_saddlepoint(std::span<const int> x, int p, const FamilySpec& family,
                          const FitOptions& options) {
  if (family.thinning.family != Thinning::Binomial)
    throw std::invalid_argument("estimation: saddlepoint fit requires binomial thinning");
  const int dim = theta_dim(family, p);
  check_series(x, p, dim);
  const int n = static_cast<int>(x.size());

  const std::vector<double> start =
      options.init ? *options.init : interior_init(x, p, family);
  const std::vector<double> z0 = theta_to_real(family, p, start);

  std::vector<int> lags(p);
  const Objective negobj = [&](const std::vector<double>& z) {
    const std::vector<double> theta = real_to_theta(family, p, z);
    const InnovationSpec eps = innovation_of(family, theta[p], has_r(family) ? theta[p + 1] : 0.0);
    const double usup = innovation_cgf_sup(eps);
    const std::span<const double> alpha(theta.data(), static_cast<size_t>(p));
    const double log_p0 = std::log(innovation_pmf(eps, 0));
    double acc = 0.0;
    for (int t = p; t < n; ++t) {
      fill_window(x, t, p, lags);
      if (x[t] == 0) {
        // support boundary: exact zero probability instead of the
        // saddlepoint approximation
        double w = log_p0;
        for (int j = 0; j < p; ++j) w += lags[j] * std::log1p(-theta[j]);
        acc -= w;
        continue;
      }
      const SaddleCgf K{alpha, lags, &eps};
      const double u = saddle_root(K, x[t], usup);
      const double w = -0.5 * std::log(2.0 * std::numbers::pi * K.d2(u)) + K.d0(u) - u * x[t];
      acc -= w;
    }
    return acc;
  };
  const OptimResult opt = minimize(negobj, z0, options.grad_tol, options.max_iterations);

  FitResult fit;
  fit.method = Method::Saddlepoint;
  fit.family = family;
  fit.p = p;
  fit.names = theta_names(family, p);
  fit.theta = real_to_theta(family, p, opt.x);
  fit.objective = -opt.f;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.n_used = n - p;
  return fit;
}

// ---- seasonal CML ---------------------------------------------------------------

FitResult fit_cml_seasonal(std::span<const int> x, int p, const FamilySpec& family,
                           int period, const FitOptions& options) {
  if (period < 2) throw std::invalid_argument("estimation: seasonal period must be >= 2");
  if (family.thinning.family == Thinning::RhoBinomial)
    throw std::invalid_argument("estimation: seasonal fit supports binomial or negbinomial thinning");
  const int dim = p + 3 + (has_r(family) ? 1 : 0);
  check_series(x, p, dim);
  const int n = static_cast<int>(x.size());
  const int maxc = series_max(x);
  const QuadratureRule rule = inversion_rule(options.quad_nodes);
  const QuadratureRule* rp =
      options.transition == TransitionMethod::Davies ? &rule : nullptr;

  std::vector<double> z0;
  if (options.init) {
    const std::vector<double>& t0 = *options.init;
    if (static_cast<int>(t0.size()) != dim)
      throw std::invalid_argument("estimation: seasonal init has the wrong length");
    z0 = simplex_to_real(std::span<const double>(t0.data(), static_cast<size_t>(p)));
    z0.push_back(t0[p]);
    z0.push_back(t0[p + 1]);
    z0.push_back(t0[p + 2]);
    if (has_r(family)) z0.push_back(std::log(std::max(t0[p + 3], 1e-8)));
  } else {
    std::vector<double> base = interior_init(x, p, family);
    z0 = simplex_to_real(std::span<const double>(base.data(), static_cast<size_t>(p)));
    z0.push_back(std::log(base[p]));  // b0
    z0.push_back(0.0);                // b1
    z0.push_back(0.0);                // b2
    if (has_r(family)) z0.push_back(std::log(base[p + 1]));
  }

  const Objective negll = [&](const std::vector<double>& z) {
    const std::vector<double> alpha =
        simplex_from_real(std::span<const double>(z.data(), static_cast<size_t>(p)));
    const SeasonalMean s{z[p], z[p + 1], z[p + 2], period};
    std::vector<double> theta = alpha;
    theta.push_back(std::exp(z[p]));
    if (has_r(family)) theta.push_back(std::exp(z[p + 3]));
    const GinarModel m = make_model(family, p, theta);
    TransitionTable table(m, options.transition, rp, maxc);
    return -table_loglik_seasonal(x, table, p, s);
  };
  const OptimResult opt = minimize(negll, z0, options.grad_tol, options.max_iterations);

  const std::vector<double> alpha =
      simplex_from_real(std::span<const double>(opt.x.data(), static_cast<size_t>(p)));
  FitResult fit;
  fit.method = Method::CmlSeasonal;
  fit.family = family;
  fit.p = p;
  fit.theta = alpha;
  fit.theta.push_back(opt.x[p]);
  fit.theta.push_back(opt.x[p + 1]);
  fit.theta.push_back(opt.x[p + 2]);
  for (int j = 1; j <= p; ++j) fit.names.push_back("alpha" + std::to_string(j));
  fit.names.insert(fit.names.end(), {"b0", "b1", "b2"});
  if (has_r(family)) {
    fit.theta.push_back(std::exp(opt.x[p + 3]));
    fit.names.push_back("r");
  }
  fit.objective = -opt.f;
  fit.converged = opt.converged;
  fit.iterations = opt.iterations;
  fit.n_used = n - p;
  fit.seasonal = SeasonalMean{opt.x[p], opt.x[p + 1], opt.x[p + 2], period};
  return fit;
}

// ---- score and Hessian -----------------------------------------------------------

ScoreHessian cml_score_hessian(std::span<const int> x, const FamilySpec& family,
                               int p, std::span<const double> theta,
                               const FitOptions& options) {
  const int dim = theta_dim(family, p);
  if (static_cast<int>(theta.size()) != dim)
    throw std::invalid_argument("estimation: parameter vector has the wrong length");
  check_series(x, p, 0);
  const int n = static_cast<int>(x.size());
  const int used = n - p;
  const int maxc = series_max(x);
  const QuadratureRule rule = inversion_rule(options.quad_nodes);
  const QuadratureRule* rp =
      options.transition == TransitionMethod::Davies ? &rule : nullptr;

  // per-observation transition probabilities at a parameter point
  const auto bvec = [&](std::span<const double> th) {
    const GinarModel m = make_model(family, p, th);
    TransitionTable table(m, options.transition, rp, maxc);
    std::vector<double> b(used);
    std::vector<int> lags(p);
    for (int t = p; t < n; ++t) {
      fill_window(x, t, p, lags);
      b[t - p] = table.prob(x[t], lags);
    }
    return b;
  };

  // interior-safe step sizes
  double asum = 0.0;
  for (int j = 0; j < p; ++j) asum += theta[j];
  std::vector<double> h(dim);
  for (int j = 0; j < dim; ++j) {
    h[j] = 1e-4 * std::max(1.0, std::abs(theta[j]));
    if (j < p)
      h[j] = std::min(h[j], 0.25 * std::min(theta[j], 1.0 - asum));
    else
      h[j] = std::min(h[j], 0.25 * theta[j]);
    if (!(h[j] > 1e-12))
      throw std::invalid_argument("estimation: parameter point must be interior");
  }

  const std::vector<double> b0 = bvec(theta);
  std::vector<std::vector<double>> bp(dim), bm(dim);
  std::vector<double> th(theta.begin(), theta.end());
  for (int j = 0; j < dim; ++j) {
    th[j] = theta[j] + h[j];
    bp[j] = bvec(th);
    th[j] = theta[j] - h[j];
    bm[j] = bvec(th);
    th[j] = theta[j];
  }

  ScoreHessian out;
  out.score = Eigen::VectorXd::Zero(dim);
  out.hessian = Eigen::MatrixXd::Zero(dim, dim);
  out.obs_scores = Eigen::MatrixXd::Zero(used, dim);

  std::vector<double> floor_b(used);
  for (int t = 0; t < used; ++t) floor_b[t] = std::max(b0[t], kProbFloor);

  for (int j = 0; j < dim; ++j) {
    for (int t = 0; t < used; ++t) {
      const double dj = (bp[j][t] - bm[j][t]) / (2.0 * h[j]);
      out.obs_scores(t, j) = dj / floor_b[t];
      out.score(j) += out.obs_scores(t, j);
    }
  }
  for (int j = 0; j < dim; ++j) {
    for (int t = 0; t < used; ++t) {
      const double djj = (bp[j][t] - 2.0 * b0[t] + bm[j][t]) / (h[j] * h[j]);
      const double dj = (bp[j][t] - bm[j][t]) / (2.0 * h[j]);
      out.hessian(j, j) += (b0[t] * djj - dj * dj) / (floor_b[t] * floor_b[t]);
    }
    for (int k = j + 1; k < dim; ++k) {
      std::vector<double> bpp, bpm, bmp, bmm;
      th[j] = theta[j] + h[j];
      th[k] = theta[k] + h[k];
      bpp = bvec(th);
      th[k] = theta[k] - h[k];
      bpm = bvec(th);
      th[j] = theta[j] - h[j];
      bmm = bvec(th);
      th[k] = theta[k] + h[k];
      bmp = bvec(th);
      th[j] = theta[j];
      th[k] = theta[k];
      double acc = 0.0;
      for (int t = 0; t < used; ++t) {
        const double djk =
            (bpp[t] - bpm[t] - bmp[t] + bmm[t]) / (4.0 * h[j] * h[k]);
        const double dj = (bp[j][t] - bm[j][t]) / (2.0 * h[j]);
        const double dk = (bp[k][t] - bm[k][t]) / (2.0 * h[k]);
        acc += (b0[t] * djk - dj * dk) / (floor_b[t] * floor_b[t]);
      }
      out.hessian(j, k) = acc;
      out.hessian(k, j) = acc;
    }
  }
  return out;
}

FitResult fit_series(std::span<const int> x, int p, const FamilySpec& family,
                     Method method, const FitOptions& options, int period) {
  switch (method) {
    case Method::Cml: return fit_cml(x, p, family, options);
    case Method::YuleWalker: return fit_yw(x, p, family);
    case Method::Cls: return fit_cls(x, p, family);
    case Method::Pseudo: return fit_pseudo(x, p, family, options);
    case Method::Whittle: return fit_whittle(x, p, family, options);
    case Method::Saddlepoint: return fit_saddlepoint(x, p, family, options);
    case Method::CmlSeasonal: return fit_cml_seasonal(x, p, family, period, options);
  }
  throw std::logic_error("estimation: unknown method");
}

}  // namespace ginar

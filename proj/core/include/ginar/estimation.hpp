#ifndef GINAR_ESTIMATION_HPP
#define GINAR_ESTIMATION_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ginar/model.hpp"
#include "ginar/quadrature.hpp"
#include "ginar/transition.hpp"

namespace ginar {

enum class Method { Cml, YuleWalker, Cls, Pseudo, Whittle, Saddlepoint, CmlSeasonal };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& token);

/// Which distributional family is being fitted: thinning family (with its
/// fixed dispersion rho) plus innovation family.  The named process
/// families map as
///   po-inar:   Binomial thinning, Poisson innovations
///   nb-inar:   Binomial thinning, NegBinomial innovations
///   geom-inar: NegBinomial thinning, Poisson innovations
struct FamilySpec {
  ThinningSpec thinning;
  Innovation innovation = Innovation::Poisson;
};

std::optional<FamilySpec> parse_family(const std::string& token);
std::string family_name(const FamilySpec& f);

/// Free parameter vector layout: alpha_1..alpha_p, mu_eps, then r for
/// NegBinomial innovations.  Seasonal fits replace mu_eps by b0, b1, b2.
int theta_dim(const FamilySpec& f, int p);
std::vector<std::string> theta_names(const FamilySpec& f, int p);

/// Builds a model from a natural-scale parameter vector; throws on
/// constraint violations.
GinarModel make_model(const FamilySpec& f, int p, std::span<const double> theta);

/// Multinomial-logit chart of the open simplex {alpha_j > 0, sum < 1}:
/// alpha_j = exp(z_j) / (1 + sum_k exp(z_k)).  Bijective; reduces to the
/// logistic map for p = 1.
std::vector<double> simplex_from_real(std::span<const double> z);
std::vector<double> simplex_to_real(std::span<const double> alpha);

struct FitOptions {
  TransitionMethod transition = TransitionMethod::Davies;
  int quad_nodes = 300;
  double grad_tol = 1e-6;
  int max_iterations = 500;
  std::optional<std::vector<double>> init;  // natural-scale start override
};

struct FitResult {
  Method method = Method::Cml;
  FamilySpec family;
  int p = 0;
  std::vector<std::string> names;
  std::vector<double> theta;          // natural scale, same order as names
  std::optional<double> objective;    // loglik (cml/pseudo/saddle), criterion
                                      // value (whittle), mean squared
                                      // one-step error (cls)
  bool converged = false;
  int iterations = 0;
  int n_used = 0;
  bool feasible = true;               // false when raw estimates violated the
                                      // constraint set (yw/cls/whittle) and
                                      // downstream use requires clamping
  std::optional<SeasonalMean> seasonal;

  double alpha_at(int j) const { return theta.at(j); }
};

/// Model carried by a fit; infeasible estimates are clamped into the
/// interior of the constraint set.  Seasonal fits yield the model at the
/// baseline mean exp(b0); use result.seasonal for the time-varying mean.
GinarModel fit_model(const FitResult& fit);

/// Sample autocovariances gamma_hat(0..max_lag), 1/n normalization,
/// overall mean subtracted.
std::vector<double> sample_acvf(std::span<const int> x, int max_lag);

/// Periodogram at the Fourier frequencies nu_j = 2 pi j / N, j = 1..N/2:
/// I(nu_j) = |sum_t (x_t - xbar) e^{-i nu_j t}|^2 / (2 pi N).
struct Periodogram {
  std::vector<double> freq;
  std::vector<double> power;
};
Periodogram periodogram(std::span<const int> x);

/// Conditional log-likelihood sum_{t=p+1}^n log P(x_t | window), with the
/// transition probabilities floored at kProbFloor.
double cml_loglik(std::span<const int> x, const GinarModel& model,
                  TransitionMethod method, const QuadratureRule* rule = nullptr);
double cml_loglik_seasonal(std::span<const int> x, const GinarModel& model,
                           const SeasonalMean& seasonal, TransitionMethod method,
                           const QuadratureRule* rule);

/// Score and Hessian of the conditional log-likelihood at a natural-scale
/// parameter point, assembled from central finite differences of the
/// per-observation transition probabilities.  theta must be interior.
struct ScoreHessian {
  Eigen::VectorXd score;
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd obs_scores;  // n_used x dim, rows are per-observation scores
};
ScoreHessian cml_score_hessian(std::span<const int> x, const FamilySpec& family,
                               int p, std::span<const double> theta,
                               const FitOptions& options = {});

FitResult fit_yw(std::span<const int> x, int p, const FamilySpec& family);
FitResult fit_cls(std::span<const int> x, int p, const FamilySpec& family);
FitResult fit_cml(std::span<const int> x, int p, const FamilySpec& family,
                  const FitOptions& options = {});
FitResult fit_pseudo(std::span<const int> x, int p, const FamilySpec& family,
                     const FitOptions& options = {});
FitResult fit_whittle(std::span<const int> x, int p, const FamilySpec& family,
                      const FitOptions& options = {});
FitResult fit_saddlepoint(std::span<const int> x, int p, const FamilySpec& family,
                          const FitOptions& options = {});
FitResult fit_cml_seasonal(std::span<const int> x, int p, const FamilySpec& family,
                           int period, const FitOptions& options = {});

/// Dispatch by method tag (CmlSeasonal needs the period).
FitResult fit_series(std::span<const int> x, int p, const FamilySpec& family,
                     Method method, const FitOptions& options = {}, int period = 0);

}  // namespace ginar

#endif

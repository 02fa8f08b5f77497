#include "ginar/innovations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ginar {

namespace {

constexpr double kPoissonLimit = 1e-12;  // NegBinomial r below this is Poisson

bool is_poisson_like(const InnovationSpec& s) {
  return s.family == Innovation::Poisson ||
         (s.family == Innovation::NegBinomial && s.r < kPoissonLimit);
}

// NegBinomial size and success-odds; Geometric is the k = 1 special case.
void nb_params(const InnovationSpec& s, double* k, double* q) {
  if (s.family == Innovation::Geometric) {
    *k = 1.0;
    *q = s.mu / (1.0 + s.mu);
  } else {
    *k = 1.0 / s.r;
    *q = s.mu / (*k + s.mu);
  }
}

}  // namespace

void validate(const InnovationSpec& spec) {
  if (!(spec.mu > 0.0) || !std::isfinite(spec.mu))
    throw std::invalid_argument("innovations: mu must be positive");
  if (spec.family == Innovation::NegBinomial &&
      (!(spec.r >= 0.0) || !std::isfinite(spec.r)))
    throw std::invalid_argument("innovations: r must be nonnegative");
}

double innovation_mean(const InnovationSpec& spec) {
  validate(spec);
  return spec.mu;
}

double innovation_variance(const InnovationSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case Innovation::Poisson: return spec.mu;
    case Innovation::NegBinomial: return spec.mu + spec.r * spec.mu * spec.mu;
    case Innovation::Geometric: return spec.mu * (1.0 + spec.mu);
  }
  throw std::logic_error("innovations: unknown family");
}

double innovation_pmf(const InnovationSpec& spec, int x) {
  validate(spec);
  if (x < 0) return 0.0;
  if (is_poisson_like(spec))
    return std::exp(x * std::log(spec.mu) - spec.mu - std::lgamma(x + 1.0));
  double k, q;
  nb_params(spec, &k, &q);
  return std::exp(std::lgamma(x + k) - std::lgamma(k) - std::lgamma(x + 1.0) +
                  k * std::log1p(-q) + x * std::log(q));
}

std::complex<double> innovation_chf(const InnovationSpec& spec, double u) {
  validate(spec);
  const std::complex<double> eiu = std::polar(1.0, u);
  if (is_poisson_like(spec)) return std::exp(spec.mu * (eiu - 1.0));
  double k, q;
  nb_params(spec, &k, &q);
  // Re(1 - q e^{iu}) >= 1-q > 0, so the principal log has no winding.
  return std::exp(k * (std::log1p(-q) - std::log(1.0 - q * eiu)));
}

double innovation_cgf(const InnovationSpec& spec, double u) {
  validate(spec);
  if (is_poisson_like(spec)) return spec.mu * std::expm1(u);
  double k, q;
  nb_params(spec, &k, &q);
  const double qe = q * std::exp(u);
  if (qe >= 1.0) throw std::domain_error("innovations: u outside CGF domain");
  return k * (std::log1p(-q) - std::log1p(-qe));
}

double innovation_cgf_d1(const InnovationSpec& spec, double u) {
  validate(spec);
  if (is_poisson_like(spec)) return spec.mu * std::exp(u);
  double k, q;
  nb_params(spec, &k, &q);
  const double qe = q * std::exp(u);
  if (qe >= 1.0) throw std::domain_error("innovations: u outside CGF domain");
  return k * qe / (1.0 - qe);
}

double innovation_cgf_d2(const InnovationSpec& spec, double u) {
  validate(spec);
  if (is_poisson_like(spec)) return spec.mu * std::exp(u);
  double k, q;
  nb_params(spec, &k, &q);
  const double qe = q * std::exp(u);
  if (qe >= 1.0) throw std::domain_error("innovations: u outside CGF domain");
  return k * qe / ((1.0 - qe) * (1.0 - qe));
}

double innovation_cgf_sup(const InnovationSpec& spec) {
  validate(spec);
  if (is_poisson_like(spec)) return std::numeric_limits<double>::infinity();
  double k, q;
  nb_params(spec, &k, &q);
  return -std::log(q);
}

int sample_innovation(const InnovationSpec& spec, RandomStream& rng) {
  validate(spec);
  if (is_poisson_like(spec)) {
    std::poisson_distribution<int> d(spec.mu);
    return d(rng);
  }
  if (spec.family == Innovation::Geometric) {
    std::geometric_distribution<int> d(1.0 / (1.0 + spec.mu));
    return d(rng);
  }
  // Gamma-Poisson mixture handles non-integer size k.
  double k, q;
  nb_params(spec, &k, &q);
  std::gamma_distribution<double> g(k, q / (1.0 - q));
  const double lambda = g(rng);
  if (!(lambda > 0.0)) return 0;  // gamma draw can underflow for tiny k
  std::poisson_distribution<int> d(lambda);
  return d(rng);
}

}  // namespace ginar

#ifndef GINAR_INNOVATIONS_HPP
#define GINAR_INNOVATIONS_HPP

#include <complex>

#include "ginar/rng.hpp"

namespace ginar {

/// Innovation families, all parametrized by their mean mu so that the
/// process mean formulas hold uniformly.
///
/// Poisson:      variance mu.
/// NegBinomial:  dispersion r >= 0, variance mu + r*mu^2; size k = 1/r and
///               success-odds q = mu/(k+mu); r = 0 degenerates to Poisson.
/// Geometric:    P(x) = mu^x/(1+mu)^(x+1), variance mu(1+mu); equals
///               NegBinomial with r = 1.
enum class Innovation { Poisson, NegBinomial, Geometric };

struct InnovationSpec {
  Innovation family = Innovation::Poisson;
  double mu = 1.0;  // mean, > 0
  double r = 0.0;   // NegBinomial dispersion, >= 0

  InnovationSpec with_mean(double m) const {
    InnovationSpec s = *this;
    s.mu = m;
    return s;
  }
};

/// Throws std::invalid_argument unless mu > 0 (and r >= 0 for NegBinomial).
void validate(const InnovationSpec& spec);

double innovation_mean(const InnovationSpec& spec);
double innovation_variance(const InnovationSpec& spec);
double innovation_pmf(const InnovationSpec& spec, int x);
std::complex<double> innovation_chf(const InnovationSpec& spec, double u);

/// Cumulant generating function K(u) = log E[exp(uX)] and derivatives.
/// Throws std::domain_error at or beyond the convergence boundary
/// (NegBinomial/Geometric: exp(u) < 1/q).
double innovation_cgf(const InnovationSpec& spec, double u);
double innovation_cgf_d1(const InnovationSpec& spec, double u);
double innovation_cgf_d2(const InnovationSpec& spec, double u);

/// Supremum of the CGF domain (+infinity for Poisson).
double innovation_cgf_sup(const InnovationSpec& spec);

int sample_innovation(const InnovationSpec& spec, RandomStream& rng);

}  // namespace ginar

#endif

#ifndef GINAR_THINNING_HPP
#define GINAR_THINNING_HPP

#include <complex>
#include <vector>

#include "ginar/rng.hpp"

namespace ginar {

/// Counting-variate family used by the generalized thinning operator
/// alpha o X = sum_{k=1}^{X} Y_k with Y_k iid, mean alpha.
///
/// Binomial:     Y ~ Bernoulli(alpha).
/// NegBinomial:  Y geometric on {0,1,...}, P(Y=y) = alpha^y / (1+alpha)^(y+1).
/// RhoBinomial:  zero-inflated shifted geometric with dispersion knob rho,
///               P(Y=0) = 1-a, P(Y=y) = a * th^(y-1) * (1-th) for y >= 1,
///               where th = rho/(1+rho) and a = alpha/(1+rho).  The success
///               probability a is chosen so that E[Y] = a*(1+rho) = alpha;
///               rho = 0 recovers the Bernoulli family exactly.
enum class Thinning { Binomial, NegBinomial, RhoBinomial };

struct ThinningSpec {
  Thinning family = Thinning::Binomial;
  double rho = 0.0;  // RhoBinomial only, in [0,1)
};

/// Throws std::invalid_argument unless alpha in [0,1) and rho in [0,1).
void validate(const ThinningSpec& spec, double alpha);

/// One draw of alpha o x.  x = 0 or alpha = 0 gives 0 (empty sum).
int thin(const ThinningSpec& spec, double alpha, int x, RandomStream& rng);

/// P(Y = y) for the counting variate.
double counting_pmf(const ThinningSpec& spec, double alpha, int y);

/// E[exp(iuY)] for the counting variate.
std::complex<double> counting_chf(const ThinningSpec& spec, double alpha, double u);

/// beta(alpha) = Var(Y).  Binomial: alpha(1-alpha); NegBinomial:
/// alpha(1+alpha); RhoBinomial: alpha(1+2rho-alpha).
double variance_coeff(const ThinningSpec& spec, double alpha);

/// P(alpha o x = z), the x-fold convolution of the counting pmf.
/// Binomial(x, alpha) resp. NegBinomial(x, 1/(1+alpha)) in closed form;
/// RhoBinomial by iterated convolution (exact up to index z).
double thinned_pmf(const ThinningSpec& spec, double alpha, int x, int z);

/// The row P(alpha o x = z) for z = 0..upto in one pass (the RhoBinomial
/// convolution is much cheaper computed whole-row than entry-wise).
std::vector<double> thinned_pmf_row(const ThinningSpec& spec, double alpha, int x, int upto);

}  // namespace ginar

#endif

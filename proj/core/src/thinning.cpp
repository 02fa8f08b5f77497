#include "ginar/thinning.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ginar {

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// P(Y = y) for the RhoBinomial counting variate.
double rho_counting_pmf(double alpha, double rho, int y) {
  const double a = alpha / (1.0 + rho);
  const double th = rho / (1.0 + rho);
  if (y == 0) return 1.0 - a;
  if (th == 0.0) return y == 1 ? a : 0.0;
  return a * std::pow(th, y - 1) * (1.0 - th);
}

}  // namespace

void validate(const ThinningSpec& spec, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("thinning: alpha must lie in [0,1)");
  if (spec.family == Thinning::RhoBinomial && !(spec.rho >= 0.0 && spec.rho < 1.0))
    throw std::invalid_argument("thinning: rho must lie in [0,1)");
}

int thin(const ThinningSpec& spec, double alpha, int x, RandomStream& rng) {
  validate(spec, alpha);
  if (x < 0) throw std::invalid_argument("thinning: x must be nonnegative");
  if (x == 0 || alpha == 0.0) return 0;
  switch (spec.family) {
    case Thinning::Binomial: {
      std::binomial_distribution<int> d(x, alpha);
      return d(rng);
    }
    case Thinning::NegBinomial: {
      // Sum of x geometrics on {0,1,...} with success 1/(1+alpha).
      std::negative_binomial_distribution<int> d(x, 1.0 / (1.0 + alpha));
      return d(rng);
    }
    case Thinning::RhoBinomial: {
      const double a = alpha / (1.0 + spec.rho);
      const double th = spec.rho / (1.0 + spec.rho);
      std::bernoulli_distribution hit(a);
      int total = 0;
      for (int k = 0; k < x; ++k) {
        if (!hit(rng)) continue;
        if (th == 0.0) {
          total += 1;
        } else {
          std::geometric_distribution<int> tail(1.0 - th);
          total += 1 + tail(rng);
        }
      }
      return total;
    }
  }
  throw std::logic_error("thinning: unknown family");
}

double counting_pmf(const ThinningSpec& spec, double alpha, int y) {
  validate(spec, alpha);
  if (y < 0) return 0.0;
  switch (spec.family) {
    case Thinning::Binomial:
      if (y == 0) return 1.0 - alpha;
      if (y == 1) return alpha;
      return 0.0;
    case Thinning::NegBinomial:
      return std::pow(alpha, y) / std::pow(1.0 + alpha, y + 1);
    case Thinning::RhoBinomial:
      return rho_counting_pmf(alpha, spec.rho, y);
  }
  throw std::logic_error("thinning: unknown family");
}

std::complex<double> counting_chf(const ThinningSpec& spec, double alpha, double u) {
  validate(spec, alpha);
  const std::complex<double> eiu = std::polar(1.0, u);
  switch (spec.family) {
    case Thinning::Binomial:
      return 1.0 - alpha + alpha * eiu;
    case Thinning::NegBinomial:
      return 1.0 / (1.0 + alpha - alpha * eiu);
    case Thinning::RhoBinomial: {
      const double a = alpha / (1.0 + spec.rho);
      const double th = spec.rho / (1.0 + spec.rho);
      return 1.0 - a + a * eiu * (1.0 - th) / (1.0 - th * eiu);
    }
  }
  throw std::logic_error("thinning: unknown family");
}

double variance_coeff(const ThinningSpec& spec, double alpha) {
  validate(spec, alpha);
  switch (spec.family) {
    case Thinning::Binomial:
      return alpha * (1.0 - alpha);
    case Thinning::NegBinomial:
      return alpha * (1.0 + alpha);
    case Thinning::RhoBinomial:
      return alpha * (1.0 + 2.0 * spec.rho - alpha);
  }
  throw std::logic_error("thinning: unknown family");
}

double thinned_pmf(const ThinningSpec& spec, double alpha, int x, int z) {
  validate(spec, alpha);
  if (x < 0) throw std::invalid_argument("thinning: x must be nonnegative");
  if (z < 0) return 0.0;
  if (x == 0 || alpha == 0.0) return z == 0 ? 1.0 : 0.0;
  switch (spec.family) {
    case Thinning::Binomial: {
      if (z > x) return 0.0;
      return std::exp(log_choose(x, z) + z * std::log(alpha) +
                      (x - z) * std::log1p(-alpha));
    }
    case Thinning::NegBinomial: {
      // NegBinomial(size x, success 1/(1+alpha)) counting failures.
      const double lp = -std::log1p(alpha);            // log 1/(1+alpha)
      const double lq = std::log(alpha) - std::log1p(alpha);
      return std::exp(log_choose(z + x - 1.0, z) + x * lp + z * lq);
    }
    case Thinning::RhoBinomial:
      return thinned_pmf_row(spec, alpha, x, z)[z];
  }
  throw std::logic_error("thinning: unknown family");
}

std::vector<double> thinned_pmf_row(const ThinningSpec& spec, double alpha, int x, int upto) {
  validate(spec, alpha);
  if (x < 0 || upto < 0) throw std::invalid_argument("thinning: x and upto must be nonnegative");
  if (spec.family != Thinning::RhoBinomial || x == 0 || alpha == 0.0) {
    std::vector<double> row(upto + 1);
    for (int z = 0; z <= upto; ++z) row[z] = thinned_pmf(spec, alpha, x, z);
    return row;
  }
  // Iterated convolution; entries up to `upto` are exact because the
  // counting support starts at zero.
  std::vector<double> base(upto + 1), acc, next(upto + 1);
  for (int y = 0; y <= upto; ++y) base[y] = rho_counting_pmf(alpha, spec.rho, y);
  acc = base;
  for (int fold = 1; fold < x; ++fold) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i <= upto; ++i) {
      if (acc[i] == 0.0) continue;
      for (int j = 0; i + j <= upto; ++j) next[i + j] += acc[i] * base[j];
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace ginar

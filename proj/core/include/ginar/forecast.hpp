#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ginar/model.hpp"

namespace ginar {

// h-step conditional means from the mean recursion, plugging earlier
// forecasts in for unobserved lags.
std::vector<double> forecast_mean(const GinarModel& model, std::span<const int> x,
                                  int horizon);
std::vector<double> forecast_mean_seasonal(const GinarModel& model,
                                           const SeasonalMean& seasonal,
                                           std::span<const int> x, int horizon);

struct HorizonForecast {
  std::vector<double> pmf;  // P(X_{n+h} = k | x_1..x_n), k = 0 .. size-1
  double mean = 0.0;
  int median = 0;
  int lo = 0;
  int hi = 0;
};

struct ForecastResult {
  int horizon = 0;
  int paths = 0;
  double level = 0.95;
  std::vector<HorizonForecast> horizons;  // index h-1
};

// Smallest support point whose cumulative mass reaches prob.
int pmf_quantile(std::span<const double> pmf, double prob);

// Monte Carlo predictive distributions. Path b draws from the stream derived
// from (seed, b), so results do not depend on evaluation order. Quantiles are
// lower quantiles of the empirical pmf; the interval is the central one at
// `level`.
ForecastResult forecast_mc(const GinarModel& model, std::span<const int> x,
                           int horizon, int paths, double level, std::uint64_t seed,
                           const SeasonalMean* seasonal = nullptr);

// Fraction of in-sample points covered by the one-step interval built from
// the preceding observations; step t uses the seed derived from (seed, t).
double one_step_coverage(const GinarModel& model, std::span<const int> x, int paths,
                         double level, std::uint64_t seed);

}  // namespace ginar

#include "ginar/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ginar/rng.hpp"

namespace ginar {

namespace {

void check_inputs(const GinarModel& model, std::span<const int> x, int horizon) {
  validate_model(model);
  if (horizon < 1) throw std::invalid_argument("forecast: horizon must be positive");
  if (static_cast<int>(x.size()) < model.order())
    throw std::invalid_argument("forecast: need at least p observations");
  for (int v : x)
    if (v < 0) throw std::invalid_argument("forecast: series must be nonnegative");
}

std::vector<double> mean_recursion(const GinarModel& model, std::span<const int> x,
                                   int horizon, const SeasonalMean* seasonal) {
  const int p = model.order();
  const int n = static_cast<int>(x.size());
  std::vector<double> state(p);  // newest first
  for (int j = 0; j < p; ++j) state[j] = x[n - 1 - j];
  std::vector<double> out(horizon);
  for (int h = 1; h <= horizon; ++h) {
    const double mu =
        seasonal ? seasonal_mu(*seasonal, n + h) : model.innovation.mu;
    double m = mu;
    for (int j = 0; j < p; ++j) m += model.alpha[j] * state[j];
    out[h - 1] = m;
    for (int j = p - 1; j > 0; --j) state[j] = state[j - 1];
    state[0] = m;
  }
  return out;
}

}  // namespace

std::vector<double> forecast_mean(const GinarModel& model, std::span<const int> x,
                                  int horizon) {
  check_inputs(model, x, horizon);
  return mean_recursion(model, x, horizon, nullptr);
}

std::vector<double> forecast_mean_seasonal(const GinarModel& model,
                                           const SeasonalMean& seasonal,
                                           std::span<const int> x, int horizon) {
  check_inputs(model, x, horizon);
  return mean_recursion(model, x, horizon, &seasonal);
}

int pmf_quantile(std::span<const double> pmf, double prob) {
  if (pmf.empty()) throw std::invalid_argument("forecast: empty distribution");
  double cum = 0.0;
  for (size_t k = 0; k < pmf.size(); ++k) {
    cum += pmf[k];
    if (cum >= prob - 1e-12) return static_cast<int>(k);
  }
  return static_cast<int>(pmf.size()) - 1;
}

ForecastResult forecast_mc(const GinarModel& model, std::span<const int> x,
                           int horizon, int paths, double level, std::uint64_t seed,
                           const SeasonalMean* seasonal) {
  check_inputs(model, x, horizon);
  if (paths < 1) throw std::invalid_argument("forecast: need at least one path");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("forecast: level must lie in (0, 1)");
  const int p = model.order();
  const int n = static_cast<int>(x.size());

  std::vector<std::vector<int>> counts(horizon);
  std::vector<int> state(p);
  for (int b = 0; b < paths; ++b) {
    RandomStream rng = make_stream(seed, {static_cast<std::uint64_t>(b)});
    for (int j = 0; j < p; ++j) state[j] = x[n - 1 - j];
    for (int h = 1; h <= horizon; ++h) {
      int next = 0;
      for (int j = 0; j < p; ++j) next += thin(model.thinning, model.alpha[j], state[j], rng);
      const InnovationSpec eps =
          seasonal ? model.innovation.with_mean(seasonal_mu(*seasonal, n + h))
                   : model.innovation;
      next += sample_innovation(eps, rng);
      auto& c = counts[h - 1];
      if (next >= static_cast<int>(c.size())) c.resize(next + 1, 0);
      ++c[next];
      for (int j = p - 1; j > 0; --j) state[j] = state[j - 1];
      state[0] = next;
    }
  }

  ForecastResult out;
  out.horizon = horizon;
  out.paths = paths;
  out.level = level;
  out.horizons.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    HorizonForecast& f = out.horizons[h];
    f.pmf.resize(counts[h].size());
    double mean = 0.0;
    for (size_t k = 0; k < counts[h].size(); ++k) {
      f.pmf[k] = static_cast<double>(counts[h][k]) / paths;
      mean += k * f.pmf[k];
    }
    f.mean = mean;
    f.median = pmf_quantile(f.pmf, 0.5);
    f.lo = pmf_quantile(f.pmf, 0.5 * (1.0 - level));
    f.hi = pmf_quantile(f.pmf, 1.0 - 0.5 * (1.0 - level));
  }
  return out;
}

double one_step_coverage(const GinarModel& model, std::span<const int> x, int paths,
                         double level, std::uint64_t seed) {
  const int p = model.order();
  const int n = static_cast<int>(x.size());
  if (n <= p) throw std::invalid_argument("forecast: series too short for coverage");
  int hits = 0;
  for (int t = p; t < n; ++t) {
    const ForecastResult f =
        forecast_mc(model, x.subspan(0, t), 1, paths, level,
                    derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    const HorizonForecast& h = f.horizons[0];
    if (x[t] >= h.lo && x[t] <= h.hi) ++hits;
  }
  return static_cast<double>(hits) / (n - p);
}

}  // namespace ginar

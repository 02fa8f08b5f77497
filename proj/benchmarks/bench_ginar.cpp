#include <benchmark/benchmark.h>

#include <vector>

#include "ginar/estimation.hpp"
#include "ginar/forecast.hpp"
#include "ginar/model.hpp"
#include "ginar/rng.hpp"
#include "ginar/transition.hpp"

using namespace ginar;

namespace {

GinarModel po2() {
  GinarModel m;
  m.alpha = {0.3, 0.25};
  m.innovation = {Innovation::Poisson, 1.0, 0.0};
  return m;
}

std::vector<int> series(int n) {
  RandomStream rng = make_stream(7, {static_cast<std::uint64_t>(n)});
  return simulate(po2(), n, 300, rng);
}

void bm_simulate(benchmark::State& state) {
  const GinarModel m = po2();
  const int n = static_cast<int>(state.range(0));
  RandomStream rng = make_stream(7, {});
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, n, 100, rng));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_simulate)->Arg(1000)->Arg(100000);

void bm_transition_conv(benchmark::State& state) {
  const GinarModel m = po2();
  const std::vector<int> lags = {4, 2};
  const int x = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transition_prob_conv(m, x, lags));
}
BENCHMARK(bm_transition_conv)->Arg(3)->Arg(20)->Arg(50);

void bm_transition_davies(benchmark::State& state) {
  const GinarModel m = po2();
  const std::vector<int> lags = {4, 2};
  const QuadratureRule rule = inversion_rule();
  const int x = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(transition_prob_davies(m, x, lags, rule));
}
BENCHMARK(bm_transition_davies)->Arg(3)->Arg(20)->Arg(50);

void bm_loglik_sweep(benchmark::State& state) {
  const GinarModel m = po2();
  const std::vector<int> x = series(static_cast<int>(state.range(0)));
  const QuadratureRule rule = inversion_rule();
  const bool davies = state.range(1) != 0;
  for (auto _ : state) {
    TransitionTable table(m, davies ? TransitionMethod::Davies : TransitionMethod::Exact,
                          &rule, 64);
    double acc = 0.0;
    std::vector<int> w(m.order());
    for (size_t t = m.order(); t < x.size(); ++t) {
      for (int j = 0; j < m.order(); ++j) w[j] = x[t - 1 - j];
      acc += table.log_prob(x[t], w);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * (x.size() - m.order()));
}
BENCHMARK(bm_loglik_sweep)->Args({500, 0})->Args({500, 1})->Args({2000, 1});

void bm_fit(benchmark::State& state) {
  const std::vector<int> x = series(500);
  FamilySpec fam;
  const Method method = static_cast<Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_series(x, 2, fam, method));
}
BENCHMARK(bm_fit)
    ->Arg(static_cast<int>(Method::YuleWalker))
    ->Arg(static_cast<int>(Method::Cls))
    ->Arg(static_cast<int>(Method::Pseudo))
    ->Arg(static_cast<int>(Method::Cml))
    ->Unit(benchmark::kMillisecond);

void bm_forecast(benchmark::State& state) {
  const GinarModel m = po2();
  const std::vector<int> x = series(500);
  for (auto _ : state)
    benchmark::DoNotOptimize(forecast_mc(m, x, 8, static_cast<int>(state.range(0)),
                                         0.95, 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_forecast)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

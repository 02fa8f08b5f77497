#ifndef GINAR_TRANSITION_HPP
#define GINAR_TRANSITION_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ginar/model.hpp"
#include "ginar/quadrature.hpp"

namespace ginar {

enum class TransitionMethod { Exact, Davies };

/// Smallest representable transition probability; log_transition() floors
/// at std::log(kProbFloor).
inline constexpr double kProbFloor = 1e-300;

/// Conditional characteristic function of X_t given the lag window:
///   phi(u) = phi_eps(u) * prod_j [phi_{Y,j}(u)]^{x_{t-j}}.
/// The mu_eps_t overload evaluates the innovation chf at a time-varying
/// mean (seasonal model).
std::complex<double> transition_chf(const GinarModel& model, double u,
                                    std::span<const int> lags);
std::complex<double> transition_chf(const GinarModel& model, double u,
                                    std::span<const int> lags, double mu_eps_t);

/// P(X_t = x | lags) by exact convolution of the p thinned pmfs with the
/// innovation pmf.
double transition_prob_conv(const GinarModel& model, int x, std::span<const int> lags);
double transition_prob_conv(const GinarModel& model, int x, std::span<const int> lags,
                            double mu_eps_t);

/// P(X_t = x | lags) by numeric chf inversion,
///   b(x) = (1/pi) int_0^pi Re(phi(u) e^{-iux}) du   for x >= 1,
/// and b(0) = P(X_t < 1) through the cdf route below.  Result is clamped
/// to [0,1]; a pre-clamp violation beyond 1e-9 throws (rule too coarse).
double transition_prob_davies(const GinarModel& model, int x, std::span<const int> lags,
                              const QuadratureRule& rule);
double transition_prob_davies(const GinarModel& model, int x, std::span<const int> lags,
                              const QuadratureRule& rule, double mu_eps_t);

/// P(X_t <= x | lags) via
///   P(X < x) = 1/2 - (1/2pi) int_{-pi}^{pi} Re(phi(u) e^{-iux} / (1 - e^{-iu})) du
/// evaluated at x+1.  The integrand is even in u and the u -> 0 limit is
/// finite, so the open half-interval rule applies directly.
double transition_cdf_davies(const GinarModel& model, int x, std::span<const int> lags,
                             const QuadratureRule& rule);

/// log P(X_t = x | lags) by either method, floored at log(kProbFloor).
double log_transition(const GinarModel& model, int x, std::span<const int> lags,
                      TransitionMethod method, const QuadratureRule* rule = nullptr);

/// Memoizing transition evaluator bound to one parameter point.  Repeated
/// likelihood sweeps over a series hit few distinct (x, lags) windows, and
/// the Davies path reuses per-node chf power tables across all of them.
/// Windows with entries above max_count fall back to the free functions.
class TransitionTable {
 public:
  TransitionTable(const GinarModel& model, TransitionMethod method,
                  const QuadratureRule* rule, int max_count);

  double prob(int x, std::span<const int> lags);
  double log_prob(int x, std::span<const int> lags);

  /// Seasonal variant: innovation mean mu_t, no memoization.
  double prob_at_mean(int x, std::span<const int> lags, double mu_t);
  double log_prob_at_mean(int x, std::span<const int> lags, double mu_t);

 private:
  double davies_from_tables(int x, std::span<const int> lags,
                            const std::vector<std::complex<double>>& eps);
  double conv_prob(int x, std::span<const int> lags, double mu_t);
  const std::vector<double>& thinned_row(int j, int lag, int upto);

  GinarModel model_;
  TransitionMethod method_;
  const QuadratureRule* rule_;
  int max_count_;
  int key_bits_ = 0;

  // Davies tables: [node] innovation chf, [j][node][value] thinning chf
  // powers, [node][value] e^{-iu v}.
  std::vector<std::complex<double>> eps_chf_;
  std::vector<std::vector<std::vector<std::complex<double>>>> thin_pow_;
  std::vector<std::vector<std::complex<double>>> phase_;
  std::vector<double> half_cot_;

  // Exact tables: thinned pmf rows keyed by (lag index, lag value).
  std::map<std::pair<int, int>, std::vector<double>> rows_;

  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace ginar

#endif

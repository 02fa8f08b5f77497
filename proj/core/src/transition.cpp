#include "ginar/transition.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ginar {

namespace {

using cdouble = std::complex<double>;

cdouble ipow(cdouble z, unsigned n) {
  cdouble r = 1.0;
  while (n) {
    if (n & 1u) r *= z;
    z *= z;
    n >>= 1u;
  }
  return r;
}

void check_window(const GinarModel& model, std::span<const int> lags) {
  if (static_cast<int>(lags.size()) != model.order())
    throw std::invalid_argument("transition: lag window must have length p");
  for (int v : lags)
    if (v < 0) throw std::invalid_argument("transition: lag values must be nonnegative");
}

double clamp_unit(double raw, const char* what) {
  if (raw < -1e-9 || raw > 1.0 + 1e-9)
    throw std::runtime_error(std::string("transition: quadrature rule insufficient for ") + what);
  return std::min(1.0, std::max(0.0, raw));
}

// P(X < x | lags) before clamping; see transition_cdf_davies.
double cdf_below_raw(const GinarModel& model, int x, std::span<const int> lags,
                     const QuadratureRule& rule, double mu_eps_t) {
  double acc = 0.0;
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = rule.nodes[k];
    const cdouble psi =
        transition_chf(model, u, lags, mu_eps_t) * std::polar(1.0, -u * x);
    acc += rule.weights[k] * (0.5 * psi.real() + 0.5 / std::tan(0.5 * u) * psi.imag());
  }
  return 0.5 - acc / std::numbers::pi;
}

double pmf_raw(const GinarModel& model, int x, std::span<const int> lags,
               const QuadratureRule& rule, double mu_eps_t) {
  if (x == 0) return cdf_below_raw(model, 1, lags, rule, mu_eps_t);
  double acc = 0.0;
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = rule.nodes[k];
    const cdouble v = transition_chf(model, u, lags, mu_eps_t) * std::polar(1.0, -u * x);
    acc += rule.weights[k] * v.real();
  }
  return acc / std::numbers::pi;
}

}  // namespace

std::complex<double> transition_chf(const GinarModel& model, double u,
                                    std::span<const int> lags) {
  return transition_chf(model, u, lags, model.innovation.mu);
}

std::complex<double> transition_chf(const GinarModel& model, double u,
                                    std::span<const int> lags, double mu_eps_t) {
  validate_model(model);
  check_window(model, lags);
  cdouble phi = innovation_chf(model.innovation.with_mean(mu_eps_t), u);
  for (int j = 0; j < model.order(); ++j)
    phi *= ipow(counting_chf(model.thinning, model.alpha[j], u),
                static_cast<unsigned>(lags[j]));
  return phi;
}

double transition_prob_conv(const GinarModel& model, int x, std::span<const int> lags) {
  return transition_prob_conv(model, x, lags, model.innovation.mu);
}

double transition_prob_conv(const GinarModel& model, int x, std::span<const int> lags,
                            double mu_eps_t) {
  validate_model(model);
  check_window(model, lags);
  if (x < 0) return 0.0;
  const InnovationSpec eps = model.innovation.with_mean(mu_eps_t);
  std::vector<double> conv(x + 1), next(x + 1);
  for (int i = 0; i <= x; ++i) conv[i] = innovation_pmf(eps, i);
  for (int j = 0; j < model.order(); ++j) {
    const std::vector<double> row =
        thinned_pmf_row(model.thinning, model.alpha[j], lags[j], x);
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i <= x; ++i) {
      if (conv[i] == 0.0) continue;
      for (int m = 0; i + m <= x; ++m) next[i + m] += conv[i] * row[m];
    }
    conv.swap(next);
  }
  return conv[x];
}

double transition_prob_davies(const GinarModel& model, int x, std::span<const int> lags,
                              const QuadratureRule& rule) {
  return transition_prob_davies(model, x, lags, rule, model.innovation.mu);
}

double transition_prob_davies(const GinarModel& model, int x, std::span<const int> lags,
                              const QuadratureRule& rule, double mu_eps_t) {
  if (x < 0) return 0.0;
  return clamp_unit(pmf_raw(model, x, lags, rule, mu_eps_t), "pmf");
}

double transition_cdf_davies(const GinarModel& model, int x, std::span<const int> lags,
                             const QuadratureRule& rule) {
  if (x < 0) return 0.0;
  return clamp_unit(cdf_below_raw(model, x + 1, lags, rule, model.innovation.mu), "cdf");
}

double log_transition(const GinarModel& model, int x, std::span<const int> lags,
                      TransitionMethod method, const QuadratureRule* rule) {
  double p = 0.0;
  if (method == TransitionMethod::Exact) {
    p = transition_prob_conv(model, x, lags);
  } else {
    if (!rule) throw std::invalid_argument("transition: Davies method needs a quadrature rule");
    p = transition_prob_davies(model, x, lags, *rule);
  }
  return std::max(std::log(p), std::log(kProbFloor));
}

TransitionTable::TransitionTable(const GinarModel& model, TransitionMethod method,
                                 const QuadratureRule* rule, int max_count)
    : model_(model), method_(method), rule_(rule), max_count_(max_count) {
  validate_model(model_);
  if (max_count_ < 0) throw std::invalid_argument("transition: max_count must be nonnegative");
  const int p = model_.order();
  const unsigned bits = std::bit_width(static_cast<unsigned>(max_count_) + 1u);
  if (bits * (p + 1) <= 64) key_bits_ = static_cast<int>(bits);

  if (method_ == TransitionMethod::Davies) {
    if (!rule_) throw std::invalid_argument("transition: Davies method needs a quadrature rule");
    const size_t K = rule_->nodes.size();
    eps_chf_.resize(K);
    half_cot_.resize(K);
    phase_.assign(K, {});
    thin_pow_.assign(p, std::vector<std::vector<cdouble>>(K));
    for (size_t k = 0; k < K; ++k) {
      const double u = rule_->nodes[k];
      eps_chf_[k] = innovation_chf(model_.innovation, u);
      half_cot_[k] = 0.5 / std::tan(0.5 * u);
      auto& ph = phase_[k];
      ph.resize(max_count_ + 2);
      const cdouble step = std::polar(1.0, -u);
      ph[0] = 1.0;
      for (int v = 1; v <= max_count_ + 1; ++v) ph[v] = ph[v - 1] * step;
      for (int j = 0; j < p; ++j) {
        auto& tp = thin_pow_[j][k];
        tp.resize(max_count_ + 1);
        const cdouble base = counting_chf(model_.thinning, model_.alpha[j], u);
        tp[0] = 1.0;
        for (int v = 1; v <= max_count_; ++v) tp[v] = tp[v - 1] * base;
      }
    }
  }
}

double TransitionTable::davies_from_tables(int x, std::span<const int> lags,
                                           const std::vector<cdouble>& eps) {
  const int p = model_.order();
  double acc = 0.0;
  if (x >= 1) {
    for (size_t k = 0; k < rule_->nodes.size(); ++k) {
      cdouble phi = eps[k];
      for (int j = 0; j < p; ++j) phi *= thin_pow_[j][k][lags[j]];
      acc += rule_->weights[k] * (phi * phase_[k][x]).real();
    }
    return clamp_unit(acc / std::numbers::pi, "pmf");
  }
  for (size_t k = 0; k < rule_->nodes.size(); ++k) {
    cdouble phi = eps[k];
    for (int j = 0; j < p; ++j) phi *= thin_pow_[j][k][lags[j]];
    const cdouble psi = phi * phase_[k][1];
    acc += rule_->weights[k] * (0.5 * psi.real() + half_cot_[k] * psi.imag());
  }
  return clamp_unit(0.5 - acc / std::numbers::pi, "pmf");
}

const std::vector<double>& TransitionTable::thinned_row(int j, int lag, int upto) {
  auto& row = rows_[{j, lag}];
  if (static_cast<int>(row.size()) < upto + 1)
    row = thinned_pmf_row(model_.thinning, model_.alpha[j], lag, upto);
  return row;
}

double TransitionTable::conv_prob(int x, std::span<const int> lags, double mu_t) {
  const InnovationSpec eps = model_.innovation.with_mean(mu_t);
  std::vector<double> conv(x + 1), next(x + 1);
  for (int i = 0; i <= x; ++i) conv[i] = innovation_pmf(eps, i);
  for (int j = 0; j < model_.order(); ++j) {
    const std::vector<double>& row = thinned_row(j, lags[j], x);
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i <= x; ++i) {
      if (conv[i] == 0.0) continue;
      for (int m = 0; i + m <= x; ++m) next[i + m] += conv[i] * row[m];
    }
    conv.swap(next);
  }
  return conv[x];
}

double TransitionTable::prob(int x, std::span<const int> lags) {
  check_window(model_, lags);
  if (x < 0) return 0.0;

  bool in_range = x <= max_count_;
  for (int v : lags) in_range = in_range && v <= max_count_;
  if (!in_range) {
    if (method_ == TransitionMethod::Exact) return transition_prob_conv(model_, x, lags);
    return transition_prob_davies(model_, x, lags, *rule_);
  }

  std::uint64_t key = 0;
  if (key_bits_ > 0) {
    key = static_cast<std::uint64_t>(x);
    for (int v : lags) key = (key << key_bits_) | static_cast<std::uint64_t>(v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }

  const double p = method_ == TransitionMethod::Exact
                       ? conv_prob(x, lags, model_.innovation.mu)
                       : davies_from_tables(x, lags, eps_chf_);
  if (key_bits_ > 0) memo_.emplace(key, p);
  return p;
}

double TransitionTable::prob_at_mean(int x, std::span<const int> lags, double mu_t) {
  check_window(model_, lags);
  if (x < 0) return 0.0;
  if (method_ == TransitionMethod::Exact) {
    bool in_range = x <= max_count_;
    for (int v : lags) in_range = in_range && v <= max_count_;
    if (!in_range) return transition_prob_conv(model_, x, lags, mu_t);
    return conv_prob(x, lags, mu_t);
  }
  bool in_range = x <= max_count_;
  for (int v : lags) in_range = in_range && v <= max_count_;
  if (!in_range) return transition_prob_davies(model_, x, lags, *rule_, mu_t);
  const InnovationSpec eps = model_.innovation.with_mean(mu_t);
  std::vector<cdouble> eps_chf(rule_->nodes.size());
  for (size_t k = 0; k < rule_->nodes.size(); ++k)
    eps_chf[k] = innovation_chf(eps, rule_->nodes[k]);
  return davies_from_tables(x, lags, eps_chf);
}

double TransitionTable::log_prob(int x, std::span<const int> lags) {
  return std::max(std::log(prob(x, lags)), std::log(kProbFloor));
}

double TransitionTable::log_prob_at_mean(int x, std::span<const int> lags, double mu_t) {
  return std::max(std::log(prob_at_mean(x, lags, mu_t)), std::log(kProbFloor));
}

}  // namespace ginar

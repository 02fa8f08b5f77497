#include "ginar/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ginar {

QuadratureRule gauss_legendre_rule(int count, double a, double b) {
  if (count < 1) throw std::invalid_argument("quadrature: count must be positive");
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration for the i-th root of the Legendre polynomial P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = a + 0.5 * (b - a) * (1.0 - x);
    rule.nodes[count - 1 - i] = a + 0.5 * (b - a) * (1.0 + x);
    rule.weights[i] = rule.weights[count - 1 - i] = 0.5 * (b - a) * w;
  }
  return rule;
}

QuadratureRule inversion_rule(int count) {
  return gauss_legendre_rule(count, 0.0, std::numbers::pi);
}

}  // namespace ginar

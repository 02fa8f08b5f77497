#ifndef GINAR_QUADRATURE_HPP
#define GINAR_QUADRATURE_HPP

#include <vector>

namespace ginar {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes on (a, b).  Nodes are interior
/// (open), so integrands with removable endpoint singularities are safe.
QuadratureRule gauss_legendre_rule(int count, double a, double b);

/// Default rule for characteristic-function inversion: `count` Gauss-
/// Legendre nodes on (0, pi).
QuadratureRule inversion_rule(int count = 300);

}  // namespace ginar

#endif

#ifndef GINAR_OPTIMIZE_HPP
#define GINAR_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace ginar {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent (reflection/expansion/contraction/
/// shrink with the standard coefficients).  Stops when the simplex
/// function spread falls below ftol (relative) or after max_iter cycles.
OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                        int max_iter, double ftol = 1e-9);

/// Quasi-Newton refinement with central-difference gradients and a
/// backtracking line search.  converged means the gradient infinity norm
/// fell below grad_tol * max(1, |f|); the scaling keeps the test reachable
/// when the objective is a large-n log likelihood whose finite-difference
/// gradient noise grows with |f|.
OptimResult bfgs_minimize(const Objective& f, std::vector<double> x0,
                          double grad_tol, int max_iter);

/// Two-stage minimizer used by the likelihood fits: simplex search first,
/// quasi-Newton polish second, sharing the max_iter budget.
OptimResult minimize(const Objective& f, std::vector<double> x0,
                     double grad_tol = 1e-6, int max_iter = 500);

}  // namespace ginar

#endif

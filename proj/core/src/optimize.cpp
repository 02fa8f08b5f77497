#include "ginar/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ginar {

namespace {

std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<double> g(n), xp = x;
  for (size_t i = 0; i < n; ++i) {
    const double h = 3e-6 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                        int max_iter, double ftol) {
  const size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("optimize: empty start point");

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i < n; ++i)
    simplex[i + 1][i] += 0.25 * std::max(1.0, std::abs(x0[i]));
  for (size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  OptimResult res;
  std::vector<size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    const size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(fv[worst] - fv[best]) <=
        ftol * (std::abs(fv[best]) + std::abs(fv[worst]) + 1e-12)) {
      res.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
    }
    for (size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - simplex[worst][d]);
    const double fr = f(xr);
    if (fr < fv[best]) {
      for (size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - simplex[worst][d]);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const std::vector<double>& ref = outside ? xr : simplex[worst];
      for (size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (ref[d] - centroid[d]);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  const size_t argmin =
      std::min_element(fv.begin(), fv.end()) - fv.begin();
  res.x = simplex[argmin];
  res.f = fv[argmin];
  res.iterations = iter;
  return res;
}

OptimResult bfgs_minimize(const Objective& f, std::vector<double> x0,
                          double grad_tol, int max_iter) {
  const size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("optimize: empty start point");

  std::vector<double> x = std::move(x0);
  double fx = f(x);
  std::vector<double> g = fd_gradient(f, x);
  // inverse Hessian approximation, identity start
  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) H[i][i] = 1.0;

  OptimResult res;
  std::vector<double> d(n), xn(n), gn(n), s(n), y(n), Hy(n);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (inf_norm(g) <= grad_tol * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      break;
    }
    for (size_t i = 0; i < n; ++i) {
      d[i] = 0.0;
      for (size_t j = 0; j < n; ++j) d[i] -= H[i][j] * g[j];
    }
    double slope = std::inner_product(d.begin(), d.end(), g.begin(), 0.0);
    if (slope >= 0.0) {  // reset to steepest descent
      for (size_t i = 0; i < n; ++i) {
        std::fill(H[i].begin(), H[i].end(), 0.0);
        H[i][i] = 1.0;
        d[i] = -g[i];
      }
      slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }
    double step = 1.0;
    bool moved = false;
    double fn = fx;
    for (int ls = 0; ls < 50; ++ls) {
      for (size_t i = 0; i < n; ++i) xn[i] = x[i] + step * d[i];
      fn = f(xn);
      if (fn <= fx + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    gn = fd_gradient(f, xn);
    double sy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
    }
    x = xn;
    fx = fn;
    g = gn;
    if (sy > 1e-12) {
      // BFGS inverse update: H <- (I - s y'/sy) H (I - y s'/sy) + s s'/sy
      double yHy = 0.0;
      for (size_t i = 0; i < n; ++i) {
        Hy[i] = 0.0;
        for (size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * y[j];
      }
      for (size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          H[i][j] += ((sy + yHy) * s[i] * s[j]) / (sy * sy) -
                     (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
    }
  }
  if (iter == max_iter && inf_norm(g) <= grad_tol * std::max(1.0, std::abs(fx)))
    res.converged = true;
  res.x = x;
  res.f = fx;
  res.iterations = iter;
  return res;
}

OptimResult minimize(const Objective& f, std::vector<double> x0,
                     double grad_tol, int max_iter) {
  const int nm_budget = std::min(150, max_iter / 2);
  OptimResult stage1 = nelder_mead(f, std::move(x0), nm_budget);
  OptimResult stage2 =
      bfgs_minimize(f, std::move(stage1.x), grad_tol, max_iter - stage1.iterations);
  stage2.iterations += stage1.iterations;
  return stage2;
}

}  // namespace ginar

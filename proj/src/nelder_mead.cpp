#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace regimecast {

NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, double step, double tol, int max_evals) {
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  const std::size_t n = x0.size();

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;

  std::vector<double> fv(n + 1);
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    fv[i] = f(pts[i]);
    ++evals;
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  bool converged = false;
  while (evals < max_evals) {
    sort_simplex();
    std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];
    if (std::fabs(fv[worst] - fv[best]) <= tol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= double(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
      return p;
    };

    std::vector<double> reflected = blend(-alpha);
    double fr = f(reflected);
    ++evals;

    if (fr < fv[order[0]]) {
      std::vector<double> expanded = blend(-alpha * gamma);
      double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        pts[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second_worst]) {
      pts[worst] = std::move(reflected);
      fv[worst] = fr;
      continue;
    }

    std::vector<double> contracted = blend(fr < fv[worst] ? -rho : rho);
    double fc = f(contracted);
    ++evals;
    if (fc < std::min(fr, fv[worst])) {
      pts[worst] = std::move(contracted);
      fv[worst] = fc;
      continue;
    }

    // shrink toward the best point
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        pts[i][j] = pts[best][j] + sigma * (pts[i][j] - pts[best][j]);
      fv[i] = f(pts[i]);
      ++evals;
    }
  }

  sort_simplex();
  NelderMeadResult out;
  out.x = pts[order[0]];
  out.fx = fv[order[0]];
  out.evals = evals;
  out.converged = converged;
  return out;
}

}  // namespace regimecast

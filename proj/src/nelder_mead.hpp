#pragma once

#include <functional>
#include <vector>

namespace regimecast {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;  // worst-best objective spread fell below tol
};

// Downhill simplex minimizer. The initial simplex is x0 plus a step along
// each coordinate. Objective values must be finite or large-but-finite
// penalties; infinities poison the centroid arithmetic.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, double step, double tol, int max_evals);

}  // namespace regimecast

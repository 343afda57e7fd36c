#pragma once

#include <functional>
#include <string>
#include <vector>

namespace epicount {

/// Objective callback: returns f(x) and, when grad is non-null, fills the
/// gradient. May return +infinity outside the feasible region.
using ObjectiveFn = std::function<double(const std::vector<double>&, std::vector<double>*)>;

struct OptimOptions {
  int max_iter = 1000;
  double grad_tol = 1e-4;  // infinity norm of the gradient
  int history = 10;        // L-BFGS memory
  int max_linesearch = 60;
  double armijo_c1 = 1e-4;
};

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> grad;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Limited-memory BFGS with backtracking line search; infinite objective
/// values during the search simply shrink the step.
OptimResult minimize_lbfgs(const ObjectiveFn& fn, std::vector<double> x0,
                           const OptimOptions& options = {});

}  // namespace epicount

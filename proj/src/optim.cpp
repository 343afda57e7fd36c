#include "epicount/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace epicount {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;  // 1 / (y.s)
};

}  // namespace

OptimResult minimize_lbfgs(const ObjectiveFn& fn, std::vector<double> x0,
                           const OptimOptions& options) {
  const size_t dim = x0.size();
  OptimResult res;
  res.x = std::move(x0);
  res.grad.assign(dim, 0.0);
  res.f = fn(res.x, &res.grad);
  if (!std::isfinite(res.f)) {
    res.message = "objective not finite at the starting point";
    return res;
  }

  std::deque<Pair> memory;
  std::vector<double> direction(dim), x_new(dim), g_new(dim), alpha_buf;

  for (res.iterations = 0; res.iterations < options.max_iter; ++res.iterations) {
    res.grad_norm = inf_norm(res.grad);
    if (res.grad_norm < options.grad_tol) {
      res.converged = true;
      res.message = "gradient tolerance reached";
      return res;
    }

    // two-loop recursion for d = -H g
    direction = res.grad;
    alpha_buf.assign(memory.size(), 0.0);
    for (int k = static_cast<int>(memory.size()) - 1; k >= 0; --k) {
      alpha_buf[k] = memory[k].rho * dot(memory[k].s, direction);
      for (size_t i = 0; i < dim; ++i) direction[i] -= alpha_buf[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const Pair& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& d : direction) d *= gamma;
    }
    for (size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, direction);
      for (size_t i = 0; i < dim; ++i)
        direction[i] += (alpha_buf[k] - beta) * memory[k].s[i];
    }
    for (double& d : direction) d = -d;

    double dg = dot(direction, res.grad);
    if (!(dg < 0.0)) {
      // not a descent direction: fall back to steepest descent
      memory.clear();
      for (size_t i = 0; i < dim; ++i) direction[i] = -res.grad[i];
      dg = -dot(res.grad, res.grad);
    }

    double step = memory.empty() ? 1.0 / std::max(1.0, inf_norm(direction)) : 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < options.max_linesearch; ++ls) {
      for (size_t i = 0; i < dim; ++i) x_new[i] = res.x[i] + step * direction[i];
      f_new = fn(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= res.f + options.armijo_c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();  // retry from steepest descent next round
        continue;
      }
      res.message = "line search failed";
      return res;
    }

    Pair pair;
    pair.s.resize(dim);
    pair.y.resize(dim);
    for (size_t i = 0; i < dim; ++i) {
      pair.s[i] = x_new[i] - res.x[i];
      pair.y[i] = g_new[i] - res.grad[i];
    }
    const double sy = dot(pair.s, pair.y);
    res.x = x_new;
    res.f = f_new;
    res.grad = g_new;
    // cautious update: skip pairs with non-positive curvature
    if (sy > 1e-12 * inf_norm(pair.s) * inf_norm(pair.y)) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }
  }
  res.grad_norm = inf_norm(res.grad);
  res.message = "iteration limit reached";
  return res;
}

}  // namespace epicount

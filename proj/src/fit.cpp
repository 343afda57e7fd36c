#include "epicount/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>

#include <Eigen/Dense>

#include "epicount/distributions.hpp"
#include "epicount/optim.hpp"
#include "epicount/rng.hpp"

namespace epicount {

namespace {

ObjectiveFn negative_posterior(const ModelContext& ctx, const PriorSpec& priors) {
  return [&ctx, &priors](const std::vector<double>& x, std::vector<double>* grad) {
    ParamVector p(ctx.layout);
    p.raw_values() = x;
    const double lp = logposterior_with_grad(ctx, priors, p, grad);
    if (grad != nullptr)
      for (double& g : *grad) g = -g;
    return -lp;
  };
}

/// Hessian of the negative log-posterior by central differences of the
/// analytic gradient.
Eigen::MatrixXd numeric_hessian(const ObjectiveFn& fn, const std::vector<double>& x) {
  const int dim = static_cast<int>(x.size());
  Eigen::MatrixXd hess(dim, dim);
  std::vector<double> xp = x, gp(dim), gm(dim);
  for (int j = 0; j < dim; ++j) {
    const double h = 1e-4 * std::max(1.0, std::fabs(x[j]));
    xp[j] = x[j] + h;
    fn(xp, &gp);
    xp[j] = x[j] - h;
    fn(xp, &gm);
    xp[j] = x[j];
    for (int i = 0; i < dim; ++i) hess(i, j) = (gp[i] - gm[i]) / (2.0 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

double natural_scale_derivative(const ParamBlock& block, double raw) {
  switch (block.transform) {
    case Transform::identity: return 1.0;
    case Transform::log_scale: return std::exp(raw);
    case Transform::logit_unit: {
      const double s = 1.0 / (1.0 + std::exp(-raw));
      return s * (1.0 - s);
    }
    case Transform::logit_interval: {
      const double s = 1.0 / (1.0 + std::exp(-raw));
      return (block.hi - block.lo) * s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace

FitResult fit_map(const ModelContext& ctx, const PriorSpec& priors, const FitOptions& options,
                  const ParamVector* init) {
  if (ctx.panel->n_times() < 3)
    throw std::invalid_argument("fit_map: need a panel with T >= 3");
  const int dim = ctx.layout.dim();
  ParamVector base(ctx.layout);
  if (init != nullptr) {
    if (!(init->layout() == ctx.layout))
      throw std::invalid_argument("fit_map: init has a different layout");
    base = *init;
  }

  const ObjectiveFn objective = negative_posterior(ctx, priors);
  OptimOptions opt_opts;
  opt_opts.max_iter = options.max_iter;
  opt_opts.grad_tol = options.grad_tol;

  const int n_starts = std::max(1, options.multistart);
  std::vector<std::vector<double>> starts(n_starts, base.raw_values());
  for (int k = 1; k < n_starts; ++k) {
    auto rng = child_rng(options.seed, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> jitter(0.0, options.jitter_sd);
    for (double& v : starts[k]) v += jitter(rng);
  }

  std::vector<OptimResult> runs(n_starts);
  auto run_one = [&](int k) { return minimize_lbfgs(objective, starts[k], opt_opts); };
  if (options.threads > 1 && n_starts > 1) {
    std::vector<std::future<OptimResult>> futures;
    for (int k = 0; k < n_starts; ++k)
      futures.push_back(std::async(std::launch::async, run_one, k));
    for (int k = 0; k < n_starts; ++k) runs[k] = futures[k].get();
  } else {
    for (int k = 0; k < n_starts; ++k) runs[k] = run_one(k);
  }

  int best = 0;
  for (int k = 1; k < n_starts; ++k) {
    if (runs[k].f < runs[best].f ||
        (runs[k].f == runs[best].f && runs[k].x < runs[best].x))
      best = k;  // ties break to the lexicographically smallest vector
  }

  FitResult fit{ParamVector(ctx.layout)};
  fit.map.raw_values() = runs[best].x;
  fit.logposterior = -runs[best].f;
  fit.grad_norm = runs[best].grad_norm;
  fit.converged = runs[best].converged;
  fit.message = runs[best].message;
  for (const auto& r : runs) fit.start_objectives.push_back(-r.f);

  // curvature-based standard errors
  fit.se_raw.assign(dim, std::numeric_limits<double>::quiet_NaN());
  fit.se_natural.assign(dim, std::numeric_limits<double>::quiet_NaN());
  fit.se_defined.assign(dim, false);
  Eigen::MatrixXd hess = numeric_hessian(objective, runs[best].x);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(dim, dim));
    for (int b = 0; b < ctx.layout.n_blocks(); ++b) {
      const ParamBlock& block = ctx.layout.block(b);
      for (int i = 0; i < block.size; ++i) {
        const int j = ctx.layout.offset(b) + i;
        if (cov(j, j) > 0.0 && std::isfinite(cov(j, j))) {
          fit.se_raw[j] = std::sqrt(cov(j, j));
          fit.se_natural[j] =
              fit.se_raw[j] * std::fabs(natural_scale_derivative(block, runs[best].x[j]));
          fit.se_defined[j] = true;
        }
      }
    }
  }

  fit.at_boundary.assign(dim, false);
  for (int j = 0; j < dim; ++j)
    if (std::fabs(runs[best].x[j]) > options.boundary_threshold) fit.at_boundary[j] = true;

  fit.fitted_mean = fitted_means(ctx, fit.map);
  return fit;
}

McmcResult sample_posterior(const ModelContext& ctx, const PriorSpec& priors,
                            const ParamVector& init, const McmcOptions& options) {
  std::vector<std::pair<int, int>> blocks;
  for (int b = 0; b < ctx.layout.n_blocks(); ++b)
    blocks.emplace_back(ctx.layout.offset(b), ctx.layout.block(b).size);
  TargetFn target = [&ctx, &priors](const std::vector<double>& x) {
    ParamVector p(ctx.layout);
    p.raw_values() = x;
    return logposterior(ctx, priors, p);
  };
  return rwm_sample(target, blocks, init.raw_values(), options);
}

std::vector<PredictRow> predict_one_step(const ModelContext& ctx, const FitResult& fit, int t) {
  const SurveillancePanel& panel = *ctx.panel;
  if (t < 2 || t > panel.n_times() + 1)
    throw std::invalid_argument("predict_one_step: t out of range");
  const int n = panel.n_areas();
  std::vector<PredictRow> rows(n);

  auto mu_at = [&](const ParamVector& p, int area) {
    if (ctx.family == Family::ee) {
      WeightMatrix w;
      if (ctx.ee.ne) w = build_weights(effective_weights(ctx.ee.weights, p), *ctx.spatial);
      return EeMeanEval(ctx.ee, p, panel, w).at(t, area);
    }
    WeightMatrix w = build_weights(effective_weights(ctx.tsir.weights, p), *ctx.spatial);
    return TsirMeanEval(ctx.tsir, p, panel, w, ctx.susceptibles).at(t, area);
  };

  if (!fit.mcmc.has_value() || fit.mcmc->draws.empty()) {
    for (int i = 0; i < n; ++i) {
      const double mu = mu_at(fit.map, i);
      rows[i] = {panel.areas()[i], mu, mu, mu, mu};
    }
    return rows;
  }

  // quantiles of mu_it across (thinned) posterior draws
  const auto& draws = fit.mcmc->draws;
  const size_t stride = std::max<size_t>(1, draws.size() / 400);
  std::vector<std::vector<double>> mu_draws(n);
  ParamVector p(ctx.layout);
  for (size_t d = 0; d < draws.size(); d += stride) {
    p.raw_values() = draws[d];
    if (ctx.family == Family::ee) {
      WeightMatrix w;
      if (ctx.ee.ne) w = build_weights(effective_weights(ctx.ee.weights, p), *ctx.spatial);
      EeMeanEval eval(ctx.ee, p, panel, w);
      for (int i = 0; i < n; ++i) mu_draws[i].push_back(eval.at(t, i));
    } else {
      WeightMatrix w = build_weights(effective_weights(ctx.tsir.weights, p), *ctx.spatial);
      TsirMeanEval eval(ctx.tsir, p, panel, w, ctx.susceptibles);
      for (int i = 0; i < n; ++i) mu_draws[i].push_back(eval.at(t, i));
    }
  }
  auto quantile = [](std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
  };
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (double m : mu_draws[i]) mean += m;
    mean /= static_cast<double>(mu_draws[i].size());
    rows[i].area = panel.areas()[i];
    rows[i].mean = mean;
    rows[i].q025 = quantile(mu_draws[i], 0.025);
    rows[i].q50 = quantile(mu_draws[i], 0.50);
    rows[i].q975 = quantile(mu_draws[i], 0.975);
  }
  return rows;
}

std::vector<BandRow> fitted_bands(const ModelContext& ctx, const FitResult& fit) {
  const SurveillancePanel& panel = *ctx.panel;
  const int n = panel.n_areas(), T = panel.n_times();
  const double phi = fit.map.get("phi");

  // With draws: average the NegBin cdf over a thinned subset, then invert.
  std::vector<std::vector<std::vector<double>>> mu_sets;  // [draw][area][t-2]
  if (fit.mcmc.has_value() && !fit.mcmc->draws.empty()) {
    const auto& draws = fit.mcmc->draws;
    const size_t stride = std::max<size_t>(1, draws.size() / 100);
    ParamVector p(ctx.layout);
    for (size_t d = 0; d < draws.size(); d += stride) {
      p.raw_values() = draws[d];
      mu_sets.push_back(fitted_means(ctx, p));
    }
  }

  std::vector<BandRow> rows;
  rows.reserve(static_cast<size_t>(n) * (T - 1));
  for (int i = 0; i < n; ++i)
    for (int t = 2; t <= T; ++t) {
      BandRow row;
      row.area = panel.areas()[i];
      row.time = t;
      row.observed = panel.count(i, t);
      if (mu_sets.empty()) {
        NegBinParams nb{fit.fitted_mean[i][t - 2], phi};
        row.q025 = negbin_quantile(0.025, nb);
        row.q50 = negbin_quantile(0.50, nb);
        row.q975 = negbin_quantile(0.975, nb);
      } else {
        double mu_max = 0.0;
        for (const auto& mus : mu_sets) mu_max = std::max(mu_max, mus[i][t - 2]);
        const long long cutoff = negbin_tail_cutoff({mu_max, phi});
        double cdf = 0.0;
        long long k = 0;
        row.q025 = row.q50 = row.q975 = -1;
        for (k = 0; k <= cutoff; ++k) {
          double pk = 0.0;
          for (const auto& mus : mu_sets) pk += negbin_pmf(k, {mus[i][t - 2], phi});
          cdf += pk / static_cast<double>(mu_sets.size());
          if (row.q025 < 0 && cdf >= 0.025) row.q025 = k;
          if (row.q50 < 0 && cdf >= 0.50) row.q50 = k;
          if (row.q975 < 0 && cdf >= 0.975) row.q975 = k;
          if (row.q975 >= 0) break;
        }
        if (row.q025 < 0) row.q025 = cutoff;
        if (row.q50 < 0) row.q50 = cutoff;
        if (row.q975 < 0) row.q975 = cutoff;
      }
      rows.push_back(row);
    }
  return rows;
}

void write_bands_csv(const std::vector<BandRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "area,time,q025,q50,q975,observed\n";
  for (const auto& r : rows)
    out << r.area << ',' << r.time << ',' << r.q025 << ',' << r.q50 << ',' << r.q975 << ','
        << r.observed << '\n';
}

ResidualMatrix pearson_residuals(const FitResult& fit, const SurveillancePanel& panel,
                                 double phi) {
  const int n = panel.n_areas(), T = panel.n_times();
  ResidualMatrix out;
  out.r.assign(n, std::vector<double>(T - 1, std::numeric_limits<double>::quiet_NaN()));
  for (int i = 0; i < n; ++i)
    for (int t = 2; t <= T; ++t) {
      const double mu = fit.fitted_mean[i][t - 2];
      if (mu <= 0.0) {
        out.undefined_cells.emplace_back(i, t);
        continue;
      }
      const double sd = std::sqrt(mu * (1.0 + mu / phi));
      out.r[i][t - 2] = (static_cast<double>(panel.count(i, t)) - mu) / sd;
    }
  return out;
}

nlohmann::json FitResult::to_json() const {
  nlohmann::json j;
  j["estimate"] = map.to_json();
  j["logposterior"] = logposterior;
  j["grad_norm"] = grad_norm;
  j["converged"] = converged;
  j["message"] = message;
  j["start_objectives"] = start_objectives;

  const ParamLayout& layout = map.layout();
  nlohmann::json se = nlohmann::json::object();
  nlohmann::json boundary = nlohmann::json::array();
  for (int b = 0; b < layout.n_blocks(); ++b) {
    const ParamBlock& block = layout.block(b);
    const int off = layout.offset(b);
    if (block.size == 1) {
      se[block.name] = {{"raw", se_raw[off]},
                        {"natural", se_natural[off]},
                        {"defined", static_cast<bool>(se_defined[off])}};
      if (at_boundary[off]) boundary.push_back(block.name);
    } else {
      std::vector<double> vals(se_raw.begin() + off, se_raw.begin() + off + block.size);
      se[block.name] = {{"raw", vals}};
    }
  }
  // NaN is not representable in JSON; patch undefined entries to null
  for (auto& [key, value] : se.items()) {
    if (value.contains("natural") && value["defined"].is_boolean() &&
        !value["defined"].get<bool>()) {
      value["raw"] = nullptr;
      value["natural"] = nullptr;
    }
    (void)key;
  }
  j["standard_errors"] = se;
  j["at_boundary"] = boundary;

  if (mcmc.has_value()) {
    nlohmann::json m;
    m["chains"] = mcmc->chains;
    m["draws_per_chain"] = mcmc->draws_per_chain;
    m["accept_rate"] = mcmc->accept_rate;
    m["rhat"] = mcmc->rhat;
    m["ok"] = mcmc->ok;
    const auto mean = mcmc->column_mean();
    const auto sd = mcmc->column_sd();
    nlohmann::json summary = nlohmann::json::object();
    for (int b = 0; b < layout.n_blocks(); ++b) {
      const ParamBlock& block = layout.block(b);
      if (block.size != 1) continue;
      const int off = layout.offset(b);
      summary[block.name] = {{"mean_raw", mean[off]},
                             {"sd_raw", sd[off]},
                             {"q025_raw", mcmc->quantile(off, 0.025)},
                             {"q50_raw", mcmc->quantile(off, 0.50)},
                             {"q975_raw", mcmc->quantile(off, 0.975)}};
    }
    m["summary"] = summary;
    j["mcmc"] = m;
  }
  return j;
}

}  // namespace epicount

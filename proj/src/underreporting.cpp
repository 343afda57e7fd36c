#include "epicount/underreporting.hpp"

#include <cmath>
#include <stdexcept>

#include "epicount/rng.hpp"

namespace epicount {

namespace {

struct Series {
  std::vector<double> cum_cases;   // C-tilde
  std::vector<double> cum_births;  // B-tilde (with the maternal lag applied)
};

Series cumulative_series(const SurveillancePanel& panel) {
  const int T = panel.n_times(), d = panel.maternal_lag();
  Series s;
  s.cum_cases.resize(T);
  s.cum_births.resize(T);
  double cc = 0.0, cb = 0.0;
  for (int t = 1; t <= T; ++t) {
    for (int i = 0; i < panel.n_areas(); ++i) {
      cc += static_cast<double>(panel.count(i, t));
      if (t - d >= 1) cb += static_cast<double>(panel.births(i, t - d));
    }
    s.cum_cases[t - 1] = cc;
    s.cum_births[t - 1] = cb;
  }
  return s;
}

struct WlsFit {
  double slope = 0.0, intercept = 0.0;
};

WlsFit weighted_slope(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& w) {
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (size_t t = 0; t < x.size(); ++t) {
    sw += w[t];
    swx += w[t] * x[t];
    swy += w[t] * y[t];
    swxx += w[t] * x[t] * x[t];
    swxy += w[t] * x[t] * y[t];
  }
  const double denom = sw * swxx - swx * swx;
  if (denom == 0.0)
    throw std::invalid_argument("fit_reporting: degenerate regression (constant cumulative "
                                "cases)");
  WlsFit fit;
  fit.slope = (sw * swxy - swx * swy) / denom;
  fit.intercept = (swy - fit.slope * swx) / sw;
  return fit;
}

}  // namespace

ReportingFit fit_reporting(const SurveillancePanel& panel, ReportingWeighting weighting,
                           int bootstrap_reps, std::uint64_t seed) {
  if (!panel.has_births())
    throw std::invalid_argument("fit_reporting: panel has no births");
  const int T = panel.n_times();
  if (T < 3) throw std::invalid_argument("fit_reporting: need T >= 3");

  Series s = cumulative_series(panel);
  if (s.cum_cases[T - 1] == 0.0)
    throw std::invalid_argument("fit_reporting: no cases ever reported; slope undefined");

  ReportingFit fit;
  fit.weights.resize(T);
  for (int t = 1; t <= T; ++t)
    fit.weights[t - 1] = weighting == ReportingWeighting::ols ? 1.0 : 1.0 / t;

  const WlsFit wls = weighted_slope(s.cum_cases, s.cum_births, fit.weights);
  fit.rho_hat = wls.slope;
  fit.intercept = wls.intercept;

  fit.residuals.resize(T);
  double res_scale = 0.0;
  for (int t = 0; t < T; ++t) {
    fit.residuals[t] = s.cum_births[t] - (wls.intercept + wls.slope * s.cum_cases[t]);
    res_scale = std::max(res_scale, std::fabs(fit.residuals[t]));
  }

  // trend test: OLS of the residuals on the time index
  {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int t = 1; t <= T; ++t) {
      sx += t;
      sy += fit.residuals[t - 1];
      sxx += static_cast<double>(t) * t;
      sxy += t * fit.residuals[t - 1];
    }
    const double n = static_cast<double>(T);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double mean_x = sx / n, mean_y = sy / n;
    double sse = 0.0, sxx_c = 0.0;
    for (int t = 1; t <= T; ++t) {
      const double fitted = mean_y + slope * (t - mean_x);
      sse += (fit.residuals[t - 1] - fitted) * (fit.residuals[t - 1] - fitted);
      sxx_c += (t - mean_x) * (t - mean_x);
    }
    const double se = std::sqrt(sse / (n - 2.0) / sxx_c);
    if (se > 1e-9 * std::max(1.0, res_scale)) {
      fit.trend_tstat = slope / se;
      fit.nonconstant_reporting = std::fabs(fit.trend_tstat) > 1.96;
    }
  }

  if (bootstrap_reps > 0) {
    // resample the increments of the residual series, rebuild the cumulative
    // errors, and refit
    std::vector<double> increments(T);
    increments[0] = fit.residuals[0];
    for (int t = 1; t < T; ++t) increments[t] = fit.residuals[t] - fit.residuals[t - 1];
    auto rng = child_rng(seed, 0);
    std::uniform_int_distribution<int> pick(0, T - 1);
    std::vector<double> slopes(bootstrap_reps);
    std::vector<double> yb(T);
    for (int rep = 0; rep < bootstrap_reps; ++rep) {
      double cum = 0.0;
      for (int t = 0; t < T; ++t) {
        cum += increments[pick(rng)];
        yb[t] = wls.intercept + wls.slope * s.cum_cases[t] + cum;
      }
      slopes[rep] = weighted_slope(s.cum_cases, yb, fit.weights).slope;
    }
    double mean = 0.0;
    for (double v : slopes) mean += v;
    mean /= bootstrap_reps;
    double var = 0.0;
    for (double v : slopes) var += (v - mean) * (v - mean);
    fit.bootstrap_se = std::sqrt(var / std::max(1, bootstrap_reps - 1));
  }
  return fit;
}

SurveillancePanel scale_counts(const SurveillancePanel& panel, const ReportingFit& fit) {
  if (!(fit.rho_hat >= 0.0) || !std::isfinite(fit.rho_hat))
    throw std::invalid_argument("scale_counts: invalid rho");
  std::vector<std::vector<long long>> counts(panel.n_areas());
  for (int i = 0; i < panel.n_areas(); ++i) {
    counts[i].resize(panel.n_times());
    for (int t = 1; t <= panel.n_times(); ++t)
      counts[i][t - 1] = static_cast<long long>(
          std::nearbyint(fit.rho_hat * static_cast<double>(panel.count(i, t))));
  }
  SurveillancePanel out(panel.areas(), std::move(counts), panel.populations(),
                        panel.periods_per_year());
  if (panel.has_births()) out.attach_births(panel.births_matrix(), panel.maternal_lag());
  return out;
}

}  // namespace epicount

#include "epicount/mean_models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epicount {

namespace {

void check_time(int t, const std::vector<std::vector<long long>>& counts) {
  if (t < 2) throw std::invalid_argument("mean is undefined at t = 1 (no lagged counts)");
  if (t > static_cast<int>(counts[0].size()) + 1)
    throw std::invalid_argument("t beyond one-step horizon");
}

}  // namespace

TsirMeanEval::TsirMeanEval(const TsirSpec& spec, const ParamVector& params,
                           const SurveillancePanel& panel, const WeightMatrix& weights,
                           const std::vector<std::vector<double>>* susceptibles)
    : spec_(spec),
      panel_(panel),
      weights_(weights),
      counts_(&panel.counts()),
      susceptibles_(susceptibles) {
  beta0_ = params.get("ar_intercept");
  beta1_ = spec.ar_trend ? params.get("ar_trend") : 0.0;
  gamma_seas_ = spec.ar_seasonality ? params.get("ar_sin") : 0.0;
  delta_seas_ = spec.ar_seasonality ? params.get("ar_cos") : 0.0;
  exp_lam_ne_ = std::exp(params.get("ne_log_rate"));
  exp_lam_en_ = spec.include_endemic ? std::exp(params.get("en_log_rate")) : 0.0;
  tau1_ = spec.tau1.free ? params.get("tau1") : spec.tau1.value;
  tau2_ = spec.tau2.free ? params.get("tau2") : spec.tau2.value;
  alpha_ = params.get("alpha");
  omega_ = 2.0 * std::numbers::pi / spec.seasonal_period;
  if (spec.use_susceptibles && susceptibles_ == nullptr)
    throw std::invalid_argument("tsir mean: susceptibles requested but not supplied");
}

double TsirMeanEval::ar_log_rate(int t) const {
  return beta0_ + beta1_ * t + gamma_seas_ * std::sin(omega_ * t) +
         delta_seas_ * std::cos(omega_ * t);
}

double TsirMeanEval::at(int t, int i) const {
  check_time(t, *counts_);
  const int n = panel_.n_areas();
  const double y_lag = static_cast<double>((*counts_)[i][t - 2]);
  const double pop_lag = static_cast<double>(panel_.population(i, t - 1));

  double neighbor_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double w = weights_(i, j);
    if (w == 0.0) continue;
    const double yj = static_cast<double>((*counts_)[j][t - 2]);
    if (yj > 0.0) neighbor_sum += w * std::pow(yj, tau2_);
  }
  const double base = std::exp(ar_log_rate(t)) * y_lag +
                      exp_lam_ne_ * std::pow(pop_lag, tau1_) * neighbor_sum;
  double epidemic = base > 0.0 ? std::pow(base, alpha_) : 0.0;
  if (spec_.use_susceptibles) epidemic *= (*susceptibles_)[i][t - 2] / pop_lag;

  const double pop_now = static_cast<double>(panel_.population(i, std::min(t, panel_.n_times())));
  return epidemic + pop_now * exp_lam_en_;
}

EeMeanEval::EeMeanEval(const EeSpec& spec, const ParamVector& params,
                       const SurveillancePanel& panel, const WeightMatrix& weights)
    : spec_(spec), panel_(panel), weights_(weights), counts_(&panel.counts()) {
  const int n = panel.n_areas();
  exp_ar_.assign(n, 0.0);
  exp_ne_.assign(n, 0.0);
  exp_b_en_.assign(n, 1.0);
  if (spec.ar) {
    const double lam = params.get("ar_log_rate");
    for (int i = 0; i < n; ++i)
      exp_ar_[i] = std::exp(lam + (spec.re_ar ? params.get("re_ar", i) : 0.0));
  }
  if (spec.ne) {
    const double lam = params.get("ne_log_rate");
    for (int i = 0; i < n; ++i)
      exp_ne_[i] = std::exp(lam + (spec.re_ne ? params.get("re_ne", i) : 0.0));
  }
  en_beta0_ = spec.en ? params.get("en_intercept") : 0.0;
  en_beta1_ = spec.en && spec.endemic_trend ? params.get("en_trend") : 0.0;
  en_sin_ = spec.en && spec.endemic_seasonality ? params.get("en_sin") : 0.0;
  en_cos_ = spec.en && spec.endemic_seasonality ? params.get("en_cos") : 0.0;
  if (spec.en && spec.re_en)
    for (int i = 0; i < n; ++i) exp_b_en_[i] = std::exp(params.get("re_en", i));
  omega_ = 2.0 * std::numbers::pi / spec.seasonal_period;
}

double EeMeanEval::ar_term(int t, int i) const {
  if (!spec_.ar) return 0.0;
  return exp_ar_[i] * static_cast<double>((*counts_)[i][t - 2]);
}

double EeMeanEval::ne_term(int t, int i) const {
  if (!spec_.ne) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < panel_.n_areas(); ++j) {
    if (j == i) continue;
    const double w = weights_(i, j);
    if (w != 0.0) acc += w * static_cast<double>((*counts_)[j][t - 2]);
  }
  return exp_ne_[i] * acc;
}

double EeMeanEval::en_term(int t, int i) const {
  if (!spec_.en) return 0.0;
  const double log_rate = en_beta0_ + en_beta1_ * t + en_sin_ * std::sin(omega_ * t) +
                          en_cos_ * std::cos(omega_ * t);
  const double pop = static_cast<double>(panel_.population(i, std::min(t, panel_.n_times())));
  return pop * std::exp(log_rate) * exp_b_en_[i];
}

double EeMeanEval::at(int t, int i) const {
  check_time(t, *counts_);
  return ar_term(t, i) + ne_term(t, i) + en_term(t, i);
}

double tsir_mean(const TsirSpec& spec, const ParamVector& params,
                 const SurveillancePanel& panel, const WeightMatrix& weights, int t, int i,
                 const std::vector<std::vector<double>>* susceptibles) {
  return TsirMeanEval(spec, params, panel, weights, susceptibles).at(t, i);
}

double ee_mean(const EeSpec& spec, const ParamVector& params, const SurveillancePanel& panel,
               const WeightMatrix& weights, int t, int i) {
  return EeMeanEval(spec, params, panel, weights).at(t, i);
}

EcologicalMeans ecological_aggregate_mean(double alpha, double beta, double zbar,
                                          double population, double y_lag) {
  if (!(zbar >= 0.0 && zbar <= 1.0))
    throw std::invalid_argument("ecological mean: zbar must lie in [0,1]");
  // lambda-bar = N [(1-zbar) e^alpha + zbar e^{alpha+beta}], mean lambda-bar y_lag / N
  const double hazard = population * ((1.0 - zbar) * std::exp(alpha) +
                                      zbar * std::exp(alpha + beta));
  EcologicalMeans out;
  out.aggregate_consistent = hazard * y_lag / population;
  out.naive = std::exp(alpha + beta * zbar) * y_lag;
  return out;
}

}  // namespace epicount

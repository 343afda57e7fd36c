#pragma once

#include <vector>

#include "epicount/model_spec.hpp"
#include "epicount/panel.hpp"
#include "epicount/weights.hpp"

namespace epicount {

/// Cached per-parameter evaluator for the TSIR conditional mean
///   mu_it = [e^{lam_ar_t} y_{i,t-1} + e^{lam_ne} N_i^tau1 sum_j w_ij y_{j,t-1}^tau2]^alpha
///           + N_i e^{lam_en}
/// with the autoregressive log-rate carrying trend and seasonality.
class TsirMeanEval {
 public:
  TsirMeanEval(const TsirSpec& spec, const ParamVector& params,
               const SurveillancePanel& panel, const WeightMatrix& weights,
               const std::vector<std::vector<double>>* susceptibles = nullptr);

  /// mu_it for t in 2..T (t = T+1 gives the one-step-ahead mean).
  double at(int t, int i) const;

  double ar_log_rate(int t) const;

  /// Substitute lagged counts (simulation reads from its own trajectory).
  void set_counts(const std::vector<std::vector<long long>>* counts) { counts_ = counts; }

 private:
  const TsirSpec& spec_;
  const SurveillancePanel& panel_;
  const WeightMatrix& weights_;
  const std::vector<std::vector<long long>>* counts_;
  const std::vector<std::vector<double>>* susceptibles_;
  double beta0_, beta1_, gamma_seas_, delta_seas_;
  double exp_lam_ne_, exp_lam_en_;
  double tau1_, tau2_, alpha_;
  double omega_;
};

/// Cached evaluator for the epidemic/endemic conditional mean
///   mu_it = e^{lam_ar + b_i^ar} y_{i,t-1} + e^{lam_ne + b_i^ne} sum_j w_ij y_{j,t-1}
///           + N_i e^{lam_en_t + b_i^en}
/// with trend and seasonality in the endemic log-rate.
class EeMeanEval {
 public:
  EeMeanEval(const EeSpec& spec, const ParamVector& params, const SurveillancePanel& panel,
             const WeightMatrix& weights);

  double at(int t, int i) const;

  /// The three additive hazard pieces of mu_it (zero when disabled).
  double ar_term(int t, int i) const;
  double ne_term(int t, int i) const;
  double en_term(int t, int i) const;

  void set_counts(const std::vector<std::vector<long long>>* counts) { counts_ = counts; }

 private:
  const EeSpec& spec_;
  const SurveillancePanel& panel_;
  const WeightMatrix& weights_;
  const std::vector<std::vector<long long>>* counts_;
  std::vector<double> exp_ar_, exp_ne_, exp_b_en_;  // per area
  double en_beta0_, en_beta1_, en_sin_, en_cos_;
  double omega_;
};

/// One-call conveniences mirroring the evaluators above.
double tsir_mean(const TsirSpec& spec, const ParamVector& params,
                 const SurveillancePanel& panel, const WeightMatrix& weights, int t, int i,
                 const std::vector<std::vector<double>>* susceptibles = nullptr);

double ee_mean(const EeSpec& spec, const ParamVector& params, const SurveillancePanel& panel,
               const WeightMatrix& weights, int t, int i);

struct EcologicalMeans {
  double aggregate_consistent;
  double naive;
};

/// Aggregate-consistent vs naive autoregressive mean under a binary
/// individual-level covariate with within-area mean zbar.
EcologicalMeans ecological_aggregate_mean(double alpha, double beta, double zbar,
                                          double population, double y_lag);

}  // namespace epicount

#pragma once

#include <vector>

#include "epicount/mean_models.hpp"
#include "epicount/model_spec.hpp"
#include "epicount/panel.hpp"
#include "epicount/spatial.hpp"

namespace epicount {

/// Binds a model family to the panel and spatial structure it is fit on.
/// The weight matrix is rebuilt from the current theta on every evaluation.
struct ModelContext {
  Family family = Family::ee;
  TsirSpec tsir;
  EeSpec ee;
  const SurveillancePanel* panel = nullptr;
  const SpatialStructure* spatial = nullptr;
  const std::vector<std::vector<double>>* susceptibles = nullptr;  // TSIR option
  ParamLayout layout;

  static ModelContext for_tsir(const TsirSpec& spec, const SurveillancePanel& panel,
                               const SpatialStructure& spatial,
                               const std::vector<std::vector<double>>* susceptibles = nullptr);
  static ModelContext for_ee(const EeSpec& spec, const SurveillancePanel& panel,
                             const SpatialStructure& spatial);

  int seasonal_period() const;
  const WeightScheme& weight_scheme() const;
};

/// sum over areas and t = 2..T of negbin_logpmf(y_it; mu_it, phi).
/// Out-of-support or overflowing parameters yield -infinity, never a crash.
double loglik(const ModelContext& ctx, const ParamVector& params);

/// loglik plus log-priors on the transformed scale (transform Jacobians
/// included, so MCMC on the raw vector targets the right density).
double logposterior(const ModelContext& ctx, const PriorSpec& priors,
                    const ParamVector& params);

/// Value of the log-posterior; when grad is non-null it is filled with the
/// analytic gradient with respect to the raw (unconstrained) parameters.
double logposterior_with_grad(const ModelContext& ctx, const PriorSpec& priors,
                              const ParamVector& params, std::vector<double>* grad);

/// Log-prior alone (with Jacobians), gradient optional; exposed for tests.
double logprior_with_grad(const ModelContext& ctx, const PriorSpec& priors,
                          const ParamVector& params, std::vector<double>* grad);

/// Conditional means mu_it for t = 2..T, as [area][t-2].
std::vector<std::vector<double>> fitted_means(const ModelContext& ctx,
                                              const ParamVector& params);

}  // namespace epicount

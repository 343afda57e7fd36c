#pragma once

#include <cstdint>
#include <vector>

#include "epicount/panel.hpp"

namespace epicount {

enum class ReportingWeighting { ols, cumulative_variance };

/// Constant reporting factor estimated as the slope of cumulative births on
/// cumulative reported cases. Residuals estimate the cumulative error series
/// and feed a trend test for non-constant reporting.
struct ReportingFit {
  double rho_hat = 0.0;
  double intercept = 0.0;          // carries the Z_t - Z_0 drift
  std::vector<double> weights;     // per-point regression weights
  std::vector<double> residuals;
  double trend_tstat = 0.0;
  bool nonconstant_reporting = false;
  double bootstrap_se = 0.0;       // 0 unless bootstrap_reps > 0
};

/// Weighted regression of cumulative births on cumulative cases, aggregated
/// over areas. `cumulative_variance` weights each point by 1/t, matching
/// Var of a cumulative sum of uncorrelated errors; `ols` is offered for
/// comparison. Optional residual bootstrap for a slope standard error.
ReportingFit fit_reporting(const SurveillancePanel& panel, ReportingWeighting weighting,
                           int bootstrap_reps = 0, std::uint64_t seed = 0);

/// Returns a panel whose counts are rho_hat * C_t rounded to nearest with
/// ties to even.
SurveillancePanel scale_counts(const SurveillancePanel& panel, const ReportingFit& fit);

}  // namespace epicount

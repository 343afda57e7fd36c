#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epicount/likelihood.hpp"
#include "epicount/mcmc.hpp"

namespace epicount {

struct FitOptions {
  int max_iter = 1000;
  double grad_tol = 1e-4;
  int multistart = 5;
  double jitter_sd = 0.5;
  std::uint64_t seed = 1;
  int threads = 1;
  double boundary_threshold = 10.0;  // |raw| beyond this flags a boundary solution
};

struct FitResult {
  ParamVector map;
  double logposterior = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string message;
  std::vector<double> start_objectives;  // per multistart, best first re-ordering not applied

  std::vector<double> se_raw;        // curvature-based, raw scale
  std::vector<double> se_natural;    // delta method
  std::vector<bool> se_defined;      // false where curvature is singular
  std::vector<bool> at_boundary;

  std::vector<std::vector<double>> fitted_mean;  // [area][t-2], t = 2..T

  std::optional<McmcResult> mcmc;

  nlohmann::json to_json() const;
};

/// Penalized MAP fit by multistart L-BFGS on the unconstrained scale.
/// Deterministic given seed and options; ties between equal-objective starts
/// break toward the lexicographically smallest parameter vector.
FitResult fit_map(const ModelContext& ctx, const PriorSpec& priors, const FitOptions& options,
                  const ParamVector* init = nullptr);

/// Adaptive random-walk Metropolis over the layout blocks, started at init
/// (typically the MAP).
McmcResult sample_posterior(const ModelContext& ctx, const PriorSpec& priors,
                            const ParamVector& init, const McmcOptions& options);

struct PredictRow {
  std::string area;
  double mean = 0.0;
  double q025 = 0.0, q50 = 0.0, q975 = 0.0;
};

/// Per-area predictive mean of mu_it with quantiles across draws (point
/// estimates collapse the band onto the mean); 2 <= t <= T+1.
std::vector<PredictRow> predict_one_step(const ModelContext& ctx, const FitResult& fit, int t);

struct BandRow {
  std::string area;
  int time = 0;
  long long q025 = 0, q50 = 0, q975 = 0;
  long long observed = 0;
};

/// Central predictive count intervals per cell, NegBin at the MAP (mixed over
/// posterior draws when present).
std::vector<BandRow> fitted_bands(const ModelContext& ctx, const FitResult& fit);

void write_bands_csv(const std::vector<BandRow>& rows, const std::string& path);

struct ResidualMatrix {
  std::vector<std::vector<double>> r;  // [area][t-2]; NaN where undefined
  std::vector<std::pair<int, int>> undefined_cells;  // (area, t)
};

/// Pearson residuals (y - mu)/sqrt(mu(1 + mu/phi)); cells with mu = 0 are
/// flagged rather than divided.
ResidualMatrix pearson_residuals(const FitResult& fit, const SurveillancePanel& panel,
                                 double phi);

}  // namespace epicount

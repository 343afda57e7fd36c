#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "epicount/mean_models.hpp"
#include "epicount/model_spec.hpp"
#include "epicount/panel.hpp"
#include "epicount/spatial.hpp"

namespace epicount {

/// One simulated trajectory; counts[i][t-1] holds y_it for t = 1..T with the
/// first column carrying the initial state. Latent series are filled by the
/// SIR-type simulators only.
struct SimResult {
  std::vector<std::vector<long long>> counts;
  std::vector<std::vector<long long>> susceptibles;
  std::vector<long long> prevalence;
  std::vector<long long> recoveries;
  int extinct_at = 0;  // first time with no infectives; 0 = never
  std::uint64_t seed = 0;
  nlohmann::json provenance;
};

enum class TsirOverdispersion { lagged_count, phi };

struct TsirSimOptions {
  /// size of the conditional negative binomial: the lagged count (classic
  /// TSIR) or the estimated phi.
  TsirOverdispersion overdispersion = TsirOverdispersion::phi;
  /// Opt-in workaround for the absorbing zero: cells whose mean is exactly 0
  /// draw from Poisson(mean) instead of emitting a structural zero.
  std::optional<double> reseed_poisson_mean;
};

/// Draws y_it ~ NegBin(mu_it, phi) forward from the panel's first column.
SimResult simulate_ee(const EeSpec& spec, const ParamVector& params,
                      const SurveillancePanel& init, const SpatialStructure& spatial,
                      int horizon, std::uint64_t seed);

SimResult simulate_tsir(const TsirSpec& spec, const ParamVector& params,
                        const SurveillancePanel& init, const SpatialStructure& spatial,
                        int horizon, std::uint64_t seed, const TsirSimOptions& options = {});

/// Exact event-driven linear birth process: waiting times Exponential(n*alpha)
/// until the horizon; returns the final population size.
long long simulate_purebirth_exact(long long n0, double alpha, double horizon,
                                   std::mt19937_64& rng);

/// Reed-Frost chain binomial: Y_t ~ Binomial(x_{t-1}, 1 - eta^{y_{t-1}}),
/// x_t = x_{t-1} - Y_t. Extinction is recorded and zeros are written to the
/// full horizon.
SimResult simulate_chain_binomial(long long x0, long long y0, double beta, long long population,
                                  int horizon, std::uint64_t seed);

/// Discrete-time SIR with latent recoveries:
///   Y_t ~ Binomial(x_{t-1}, 1 - exp(-beta I_{t-1}/N)),
///   Z_t ~ Binomial(I_{t-1}, 1 - exp(-gamma)),
/// prevalence updated by I_t = I_{t-1} + Y_t - Z_t so that it can never
/// overdraw. R0 = beta/gamma is recorded in provenance.
SimResult simulate_sir_latent(long long x0, long long i0, double beta, double gamma,
                              long long population, int horizon, std::uint64_t seed);

/// Deterministic susceptible bookkeeping X_t = X_{t-1} - rho*C_t + B_{t-d},
/// started at xbar0 in every area; returns [area][t-1] and appends a warning
/// per negative value.
std::vector<std::vector<double>> reconstruct_susceptibles(const SurveillancePanel& panel,
                                                          double reporting_rho, double xbar0,
                                                          std::vector<std::string>* warnings =
                                                              nullptr);

}  // namespace epicount

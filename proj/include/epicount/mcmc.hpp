#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace epicount {

/// Log-density callback on the unconstrained scale.
using TargetFn = std::function<double(const std::vector<double>&)>;

struct McmcOptions {
  int draws = 1000;   // kept draws per chain
  int burnin = 1000;  // adaptation happens here and is then frozen
  int chains = 2;
  std::uint64_t seed = 1;
  int threads = 1;
  double initial_scale = 0.2;
  int adapt_interval = 50;
};

struct McmcResult {
  std::vector<std::vector<double>> draws;  // [chain*draws_per_chain][dim], chain-major
  int chains = 0;
  int draws_per_chain = 0;
  double accept_rate = 0.0;                // post-burnin, all blocks pooled
  std::vector<double> block_scales;        // frozen proposal scales
  std::vector<double> rhat;                // split-chain scale reduction per parameter
  bool ok = true;
  std::string message;

  std::vector<double> column_mean() const;
  std::vector<double> column_sd() const;
  double quantile(int column, double q) const;
};

/// Blockwise adaptive random-walk Metropolis. Each (offset,size) block gets
/// an isotropic normal proposal whose scale adapts toward a standard
/// acceptance target during burn-in only, preserving detailed balance for
/// the kept draws. Reproducible given the seed; chains may run in parallel.
McmcResult rwm_sample(const TargetFn& target, const std::vector<std::pair<int, int>>& blocks,
                      const std::vector<double>& init, const McmcOptions& options);

}  // namespace epicount

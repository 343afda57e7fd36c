#include "epicount/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "epicount/rng.hpp"

namespace epicount {

namespace {

struct ChainOutput {
  std::vector<std::vector<double>> draws;
  long long accepted = 0, proposed = 0;
  std::vector<double> scales;
};

ChainOutput run_chain(const TargetFn& target, const std::vector<std::pair<int, int>>& blocks,
                      std::vector<double> x, const McmcOptions& opts, std::uint64_t chain_idx) {
  auto rng = child_rng(opts.seed, chain_idx);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  ChainOutput out;
  out.scales.assign(blocks.size(), opts.initial_scale);
  std::vector<long long> batch_accept(blocks.size(), 0);

  double logp = target(x);
  if (!std::isfinite(logp))
    throw std::invalid_argument("mcmc: initial point has non-finite target density");

  std::vector<double> proposal = x;
  const int total = opts.burnin + opts.draws;
  out.draws.reserve(opts.draws);
  for (int iter = 0; iter < total; ++iter) {
    const bool adapting = iter < opts.burnin;
    for (size_t b = 0; b < blocks.size(); ++b) {
      const auto [off, size] = blocks[b];
      proposal = x;
      for (int k = 0; k < size; ++k) proposal[off + k] += out.scales[b] * normal(rng);
      const double logp_new = target(proposal);
      const double log_alpha = logp_new - logp;
      bool accept = false;
      if (std::isfinite(logp_new) &&
          (log_alpha >= 0.0 || std::log(unif(rng)) < log_alpha)) {
        accept = true;
        x = proposal;
        logp = logp_new;
      }
      if (adapting) {
        if (accept) ++batch_accept[b];
        if ((iter + 1) % opts.adapt_interval == 0) {
          const double target_rate = size == 1 ? 0.44 : 0.234;
          const double rate =
              static_cast<double>(batch_accept[b]) / opts.adapt_interval;
          out.scales[b] *= std::exp(0.66 * (rate - target_rate));
          batch_accept[b] = 0;
        }
      } else {
        ++out.proposed;
        if (accept) ++out.accepted;
      }
    }
    if (!adapting) out.draws.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<double> McmcResult::column_mean() const {
  std::vector<double> m(draws.empty() ? 0 : draws[0].size(), 0.0);
  for (const auto& row : draws)
    for (size_t j = 0; j < m.size(); ++j) m[j] += row[j];
  for (double& v : m) v /= static_cast<double>(draws.size());
  return m;
}

std::vector<double> McmcResult::column_sd() const {
  auto m = column_mean();
  std::vector<double> s(m.size(), 0.0);
  for (const auto& row : draws)
    for (size_t j = 0; j < m.size(); ++j) s[j] += (row[j] - m[j]) * (row[j] - m[j]);
  for (double& v : s) v = std::sqrt(v / std::max<size_t>(1, draws.size() - 1));
  return s;
}

double McmcResult::quantile(int column, double q) const {
  std::vector<double> col;
  col.reserve(draws.size());
  for (const auto& row : draws) col.push_back(row[column]);
  std::sort(col.begin(), col.end());
  const double pos = q * static_cast<double>(col.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, col.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return col[lo] * (1.0 - frac) + col[hi] * frac;
}

McmcResult rwm_sample(const TargetFn& target, const std::vector<std::pair<int, int>>& blocks,
                      const std::vector<double>& init, const McmcOptions& options) {
  if (options.chains < 1 || options.draws < 1)
    throw std::invalid_argument("mcmc: need at least one chain and one draw");

  std::vector<ChainOutput> outputs(options.chains);
  if (options.threads > 1 && options.chains > 1) {
    std::vector<std::future<ChainOutput>> futures;
    for (int c = 0; c < options.chains; ++c)
      futures.push_back(std::async(std::launch::async, [&, c] {
        return run_chain(target, blocks, init, options, static_cast<std::uint64_t>(c));
      }));
    for (int c = 0; c < options.chains; ++c) outputs[c] = futures[c].get();
  } else {
    for (int c = 0; c < options.chains; ++c)
      outputs[c] = run_chain(target, blocks, init, options, static_cast<std::uint64_t>(c));
  }

  McmcResult res;
  res.chains = options.chains;
  res.draws_per_chain = options.draws;
  long long accepted = 0, proposed = 0;
  for (const auto& out : outputs) {
    accepted += out.accepted;
    proposed += out.proposed;
    res.draws.insert(res.draws.end(), out.draws.begin(), out.draws.end());
  }
  res.block_scales = outputs[0].scales;
  res.accept_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;

  // split-chain scale reduction
  const int dim = static_cast<int>(init.size());
  const int half = options.draws / 2;
  res.rhat.assign(dim, 1.0);
  if (half >= 2) {
    const int m = options.chains * 2;
    for (int j = 0; j < dim; ++j) {
      std::vector<double> means(m, 0.0), vars(m, 0.0);
      for (int c = 0; c < options.chains; ++c)
        for (int h = 0; h < 2; ++h) {
          const int seq = c * 2 + h;
          const int start = c * options.draws + h * half;
          for (int k = 0; k < half; ++k) means[seq] += res.draws[start + k][j];
          means[seq] /= half;
          for (int k = 0; k < half; ++k) {
            const double d = res.draws[start + k][j] - means[seq];
            vars[seq] += d * d;
          }
          vars[seq] /= (half - 1);
        }
      double grand = 0.0;
      for (double v : means) grand += v;
      grand /= m;
      double between = 0.0, within = 0.0;
      for (int s = 0; s < m; ++s) {
        between += (means[s] - grand) * (means[s] - grand);
        within += vars[s];
      }
      between *= static_cast<double>(half) / (m - 1);
      within /= m;
      if (within > 0.0) {
        const double var_plus =
            (static_cast<double>(half - 1) / half) * within + between / half;
        res.rhat[j] = std::sqrt(var_plus / within);
      }
    }
  }

  if (res.accept_rate == 0.0) {
    res.ok = false;
    res.message = "zero acceptance after adaptation; proposal scales unusable";
  }
  return res;
}

}  // namespace epicount

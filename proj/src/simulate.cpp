#include "epicount/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "epicount/distributions.hpp"
#include "epicount/rng.hpp"

namespace epicount {

namespace {

std::vector<std::vector<long long>> seeded_counts(const SurveillancePanel& init, int horizon) {
  if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
  std::vector<std::vector<long long>> counts(init.n_areas(),
                                             std::vector<long long>(horizon, 0));
  for (int i = 0; i < init.n_areas(); ++i) counts[i][0] = init.count(i, 1);
  return counts;
}

long long poisson_draw(double mean, std::mt19937_64& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long long> pois(mean);
  return pois(rng);
}

}  // namespace

SimResult simulate_ee(const EeSpec& spec, const ParamVector& params,
                      const SurveillancePanel& init, const SpatialStructure& spatial,
                      int horizon, std::uint64_t seed) {
  spec.validate();
  WeightMatrix weights;
  if (spec.ne) weights = build_weights(effective_weights(spec.weights, params), spatial);
  SimResult out;
  out.seed = seed;
  out.counts = seeded_counts(init, horizon);

  EeMeanEval mean(spec, params, init, weights);
  mean.set_counts(&out.counts);
  const double phi = params.get("phi");
  if (!(phi > 0.0)) throw std::invalid_argument("simulate_ee: phi must be > 0");

  auto rng = child_rng(seed, 0);
  for (int t = 2; t <= horizon; ++t)
    for (int i = 0; i < init.n_areas(); ++i) {
      const double mu = mean.at(t, i);
      if (!std::isfinite(mu)) throw std::invalid_argument("simulate_ee: non-finite mean");
      out.counts[i][t - 1] = negbin_sample({mu, phi}, rng);
    }
  out.provenance = {{"model", "ee"}, {"seed", seed}, {"params", params.to_json()}};
  return out;
}

SimResult simulate_tsir(const TsirSpec& spec, const ParamVector& params,
                        const SurveillancePanel& init, const SpatialStructure& spatial,
                        int horizon, std::uint64_t seed, const TsirSimOptions& options) {
  spec.validate();
  WeightMatrix weights = build_weights(effective_weights(spec.weights, params), spatial);
  SimResult out;
  out.seed = seed;
  out.counts = seeded_counts(init, horizon);

  TsirMeanEval mean(spec, params, init, weights);
  mean.set_counts(&out.counts);
  const double phi = params.get("phi");
  if (!(phi > 0.0)) throw std::invalid_argument("simulate_tsir: phi must be > 0");

  auto rng = child_rng(seed, 0);
  for (int t = 2; t <= horizon; ++t)
    for (int i = 0; i < init.n_areas(); ++i) {
      const double mu = mean.at(t, i);
      if (!std::isfinite(mu)) throw std::invalid_argument("simulate_tsir: non-finite mean");
      long long y = 0;
      if (mu == 0.0) {
        // absorbing zero unless the reseeding workaround is requested
        y = options.reseed_poisson_mean ? poisson_draw(*options.reseed_poisson_mean, rng) : 0;
      } else if (options.overdispersion == TsirOverdispersion::phi) {
        y = negbin_sample({mu, phi}, rng);
      } else {
        const long long y_lag = out.counts[i][t - 2];
        // size = lagged count; with no local infectives the conditional law
        // degenerates to Poisson (immigration only)
        y = y_lag > 0 ? negbin_sample({mu, static_cast<double>(y_lag)}, rng)
                      : poisson_draw(mu, rng);
      }
      out.counts[i][t - 1] = y;
    }
  out.provenance = {{"model", "tsir"},
                    {"seed", seed},
                    {"params", params.to_json()},
                    {"overdispersion",
                     options.overdispersion == TsirOverdispersion::phi ? "phi" : "lagged_count"}};
  return out;
}

long long simulate_purebirth_exact(long long n0, double alpha, double horizon,
                                   std::mt19937_64& rng) {
  if (n0 < 1) throw std::invalid_argument("purebirth: n0 must be >= 1");
  if (alpha < 0.0 || horizon < 0.0)
    throw std::invalid_argument("purebirth: alpha and horizon must be >= 0");
  if (alpha == 0.0) return n0;
  long long n = n0;
  double t = 0.0;
  while (true) {
    std::exponential_distribution<double> wait(static_cast<double>(n) * alpha);
    t += wait(rng);
    if (t > horizon) break;
    ++n;
  }
  return n;
}

SimResult simulate_chain_binomial(long long x0, long long y0, double beta, long long population,
                                  int horizon, std::uint64_t seed) {
  if (x0 < 0 || y0 < 0 || x0 + y0 > population)
    throw std::invalid_argument("chain binomial: invalid initial state");
  if (beta < 0.0) throw std::invalid_argument("chain binomial: beta must be >= 0");
  if (horizon < 1) throw std::invalid_argument("chain binomial: horizon must be >= 1");

  SimResult out;
  out.seed = seed;
  out.counts.assign(1, std::vector<long long>(horizon, 0));
  out.susceptibles.assign(1, std::vector<long long>(horizon, 0));
  out.counts[0][0] = y0;
  out.susceptibles[0][0] = x0;

  auto rng = child_rng(seed, 0);
  long long x = x0, y = y0;
  for (int t = 2; t <= horizon; ++t) {
    if (y == 0) {
      if (out.extinct_at == 0) out.extinct_at = t;
      out.susceptibles[0][t - 1] = x;
      continue;  // explicit zeros to the full horizon
    }
    const double p_infect =
        -std::expm1(-beta * static_cast<double>(y) / static_cast<double>(population));
    std::binomial_distribution<long long> draw(x, p_infect);
    const long long y_new = p_infect > 0.0 ? draw(rng) : 0;
    x -= y_new;
    y = y_new;
    out.counts[0][t - 1] = y;
    out.susceptibles[0][t - 1] = x;
  }
  out.provenance = {{"model", "chain_binomial"}, {"beta", beta}, {"population", population},
                    {"seed", seed}};
  return out;
}

SimResult simulate_sir_latent(long long x0, long long i0, double beta, double gamma,
                              long long population, int horizon, std::uint64_t seed) {
  if (x0 < 0 || i0 < 0) throw std::invalid_argument("sir latent: invalid initial state");
  if (beta < 0.0 || gamma < 0.0)
    throw std::invalid_argument("sir latent: rates must be >= 0");
  if (horizon < 1) throw std::invalid_argument("sir latent: horizon must be >= 1");

  SimResult out;
  out.seed = seed;
  out.counts.assign(1, std::vector<long long>(horizon, 0));
  out.susceptibles.assign(1, std::vector<long long>(horizon, 0));
  out.prevalence.assign(horizon, 0);
  out.recoveries.assign(horizon, 0);
  out.counts[0][0] = i0;  // seeding cohort shown as incidence at t = 1
  out.susceptibles[0][0] = x0;
  out.prevalence[0] = i0;

  auto rng = child_rng(seed, 0);
  long long x = x0, prev = i0;
  const double p_recover = -std::expm1(-gamma);
  for (int t = 2; t <= horizon; ++t) {
    const double p_infect =
        -std::expm1(-beta * static_cast<double>(prev) / static_cast<double>(population));
    long long y_new = 0, z_new = 0;
    if (prev > 0) {
      if (p_infect > 0.0) {
        std::binomial_distribution<long long> draw_y(x, p_infect);
        y_new = draw_y(rng);
      }
      if (p_recover > 0.0) {
        std::binomial_distribution<long long> draw_z(prev, p_recover);
        z_new = draw_z(rng);
      }
    } else if (out.extinct_at == 0) {
      out.extinct_at = t;
    }
    x -= y_new;
    prev = prev + y_new - z_new;
    out.counts[0][t - 1] = y_new;
    out.susceptibles[0][t - 1] = x;
    out.prevalence[t - 1] = prev;
    out.recoveries[t - 1] = z_new;
  }
  out.provenance = {{"model", "sir_latent"}, {"beta", beta}, {"gamma", gamma},
                    {"r0", gamma > 0.0 ? beta / gamma : std::numeric_limits<double>::infinity()},
                    {"population", population}, {"seed", seed}};
  return out;
}

std::vector<std::vector<double>> reconstruct_susceptibles(const SurveillancePanel& panel,
                                                          double reporting_rho, double xbar0,
                                                          std::vector<std::string>* warnings) {
  if (!panel.has_births())
    throw std::invalid_argument("reconstruct_susceptibles: panel has no births");
  if (reporting_rho < 0.0)
    throw std::invalid_argument("reconstruct_susceptibles: rho must be >= 0");
  const int d = panel.maternal_lag();
  std::vector<std::vector<double>> x(panel.n_areas(),
                                     std::vector<double>(panel.n_times(), 0.0));
  for (int i = 0; i < panel.n_areas(); ++i) {
    double cur = xbar0;
    for (int t = 1; t <= panel.n_times(); ++t) {
      const double births = t - d >= 1 ? static_cast<double>(panel.births(i, t - d)) : 0.0;
      cur = cur - reporting_rho * static_cast<double>(panel.count(i, t)) + births;
      x[i][t - 1] = cur;
      if (cur < 0.0 && warnings != nullptr)
        warnings->push_back("negative susceptibles at area '" + panel.areas()[i] + "', time " +
                            std::to_string(t));
    }
  }
  return x;
}

}  // namespace epicount

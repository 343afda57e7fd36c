#pragma once

#include <random>

namespace epicount {

/// Mean/size negative binomial: variance mu*(1 + mu/size), p = mu/(mu+size).
/// Larger size approaches the Poisson.
struct NegBinParams {
  double mu = 0.0;    // mean >= 0
  double size = 1.0;  // overdispersion parameter r > 0
};

/// Linear (Yule-Furry) pure birth process observed at a fixed horizon.
struct PureBirthLaw {
  long long n0 = 1;      // initial count >= 1
  double rate = 0.0;     // per-individual birth rate alpha >= 0
  double horizon = 0.0;  // elapsed time t >= 0

  /// p_t = 1 - exp(-alpha t), in [0,1).
  double success_prob() const;
};

double negbin_logpmf(long long k, const NegBinParams& params);
double negbin_pmf(long long k, const NegBinParams& params);

/// Gamma-Poisson mixture draw; mu = 0 is a point mass at 0.
long long negbin_sample(const NegBinParams& params, std::mt19937_64& rng);

/// Smallest k with P(K <= k) >= q.
long long negbin_quantile(double q, const NegBinParams& params);

/// Tail cutoff K = mu + 20*sqrt(mu*(1+mu/size)) + 50 used when summing pmfs.
long long negbin_tail_cutoff(const NegBinParams& params);

double poisson_logpmf(long long k, double mean);
double poisson_pmf(long long k, double mean);

double binomial_logpmf(long long k, long long n, double p);

/// P(N(t) = n | N(0) = n0) for the total population of the pure birth
/// process; n >= n0.
double purebirth_total_pmf(long long n, const PureBirthLaw& law);

/// P(M(t) = b) for the number of births M(t) = N(t) - n0; b >= 0.
double purebirth_births_pmf(long long b, const PureBirthLaw& law);

/// Reed-Frost transition probability: Binomial(x_prev, 1 - eta^y_prev) with
/// eta = exp(-beta/N).
double chain_binomial_pmf(long long y_t, long long x_prev, long long y_prev, double beta,
                          double population);

}  // namespace epicount

#include "epicount/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epicount {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_choose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace

double PureBirthLaw::success_prob() const { return -std::expm1(-rate * horizon); }

double negbin_logpmf(long long k, const NegBinParams& params) {
  if (k < 0) throw std::invalid_argument("negbin_logpmf: negative count");
  if (!(params.size > 0.0)) throw std::invalid_argument("negbin_logpmf: size must be > 0");
  if (params.mu < 0.0) throw std::invalid_argument("negbin_logpmf: mean must be >= 0");
  if (params.mu == 0.0) return k == 0 ? 0.0 : kNegInf;
  const double r = params.size, mu = params.mu;
  const double kk = static_cast<double>(k);
  // log C(k+r-1, k) + r log(r/(r+mu)) + k log(mu/(r+mu)), via log-gamma
  return std::lgamma(kk + r) - std::lgamma(r) - std::lgamma(kk + 1.0) -
         r * std::log1p(mu / r) + kk * (std::log(mu) - std::log(r + mu));
}

double negbin_pmf(long long k, const NegBinParams& params) {
  return std::exp(negbin_logpmf(k, params));
}

long long negbin_sample(const NegBinParams& params, std::mt19937_64& rng) {
  if (!(params.size > 0.0)) throw std::invalid_argument("negbin_sample: size must be > 0");
  if (params.mu < 0.0) throw std::invalid_argument("negbin_sample: mean must be >= 0");
  if (params.mu == 0.0) return 0;
  std::gamma_distribution<double> gamma(params.size, params.mu / params.size);
  double lambda = gamma(rng);
  if (lambda <= 0.0) return 0;
  std::poisson_distribution<long long> poisson(lambda);
  return poisson(rng);
}

long long negbin_quantile(double q, const NegBinParams& params) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("negbin_quantile: q must be in [0,1)");
  const long long cutoff = negbin_tail_cutoff(params);
  double cdf = 0.0;
  for (long long k = 0; k <= cutoff; ++k) {
    cdf += negbin_pmf(k, params);
    if (cdf >= q) return k;
  }
  return cutoff;
}

long long negbin_tail_cutoff(const NegBinParams& params) {
  const double var = params.mu * (1.0 + params.mu / params.size);
  return static_cast<long long>(params.mu + 20.0 * std::sqrt(var) + 50.0);
}

double poisson_logpmf(long long k, double mean) {
  if (k < 0) throw std::invalid_argument("poisson_logpmf: negative count");
  if (mean < 0.0) throw std::invalid_argument("poisson_logpmf: mean must be >= 0");
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  return static_cast<double>(k) * std::log(mean) - mean -
         std::lgamma(static_cast<double>(k + 1));
}

double poisson_pmf(long long k, double mean) { return std::exp(poisson_logpmf(k, mean)); }

double binomial_logpmf(long long k, long long n, double p) {
  if (n < 0) throw std::invalid_argument("binomial_logpmf: n must be >= 0");
  if (k < 0 || k > n) return kNegInf;
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_logpmf: p outside [0,1]");
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

double purebirth_total_pmf(long long n, const PureBirthLaw& law) {
  if (law.n0 < 1) throw std::invalid_argument("purebirth: n0 must be >= 1");
  if (law.rate < 0.0 || law.horizon < 0.0)
    throw std::invalid_argument("purebirth: rate and horizon must be >= 0");
  if (n < law.n0) throw std::invalid_argument("purebirth_total_pmf: n < n0");
  const double at = law.rate * law.horizon;
  if (at == 0.0) return n == law.n0 ? 1.0 : 0.0;
  // C(n-1, n-n0) e^{-at n0} (1 - e^{-at})^{n-n0}
  const double log_p = log_choose(n - 1, n - law.n0) - at * static_cast<double>(law.n0) +
                       static_cast<double>(n - law.n0) * std::log(-std::expm1(-at));
  return std::exp(log_p);
}

double purebirth_births_pmf(long long b, const PureBirthLaw& law) {
  if (b < 0) throw std::invalid_argument("purebirth_births_pmf: negative count");
  return purebirth_total_pmf(b + law.n0, law);
}

double chain_binomial_pmf(long long y_t, long long x_prev, long long y_prev, double beta,
                          double population) {
  if (beta < 0.0) throw std::invalid_argument("chain_binomial_pmf: beta must be >= 0");
  if (population <= 0.0) throw std::invalid_argument("chain_binomial_pmf: population must be > 0");
  if (y_prev < 0 || x_prev < 0) throw std::invalid_argument("chain_binomial_pmf: negative state");
  if (y_t > x_prev) throw std::invalid_argument("chain_binomial_pmf: y_t exceeds x_prev");
  // 1 - eta^y_prev with eta = exp(-beta/N)
  const double p_infect = -std::expm1(-beta * static_cast<double>(y_prev) / population);
  return std::exp(binomial_logpmf(y_t, x_prev, p_infect));
}

}  // namespace epicount

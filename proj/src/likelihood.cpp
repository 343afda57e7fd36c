#include "epicount/likelihood.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

#include "epicount/distributions.hpp"

namespace epicount {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Weight matrix plus the pieces needed for d(mu)/d(theta_raw):
/// dw_ij/drho = w_ij (c_i - log base_ij) with c_i = sum_k w_ik log base_ik,
/// and drho/draw = rho for the logit-reparameterized decay.
struct WeightDerivs {
  WeightMatrix W;
  std::vector<std::vector<double>> wlog;  // w_ij * log(base_ij)
  std::vector<double> c;                  // row sums of wlog
  bool theta_free = false;
  double drho_draw = 0.0;

  int n() const { return W.size(); }
};

WeightDerivs make_weight_derivs(const WeightScheme& scheme, const SpatialStructure& spatial,
                                bool theta_free) {
  WeightDerivs wd;
  wd.W = build_weights(scheme, spatial);
  wd.theta_free = theta_free && scheme.has_decay();
  if (!wd.theta_free) return wd;
  const int n = wd.W.size();
  wd.wlog.assign(n, std::vector<double>(n, 0.0));
  wd.c.assign(n, 0.0);
  const bool by_distance = scheme.kind == WeightKind::distance_power_law;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = wd.W(i, j);
      if (w == 0.0) continue;
      const double base = by_distance ? spatial.distance(i, j)
                                      : static_cast<double>(spatial.order(i, j));
      wd.wlog[i][j] = w * std::log(base);
      wd.c[i] += wd.wlog[i][j];
    }
  }
  wd.drho_draw = scheme.rho();  // drho/dtheta * dtheta/draw collapses to rho
  return wd;
}

struct CellDeriv {
  double dldmu = 0.0;
  double dldr = 0.0;
};

/// d log NegBin(k; mu, r) / d mu and / d r. Callers have excluded the
/// impossible (mu = 0, k > 0) case.
CellDeriv negbin_derivs(long long k, double mu, double r) {
  CellDeriv d;
  const double kk = static_cast<double>(k);
  if (mu == 0.0) {
    d.dldmu = -1.0;
    d.dldr = 0.0;
    return d;
  }
  d.dldmu = kk / mu - (kk + r) / (mu + r);
  d.dldr = boost::math::digamma(kk + r) - boost::math::digamma(r) - std::log1p(mu / r) +
           (mu - kk) / (mu + r);
  return d;
}

struct BlockOffsets {
  int ar_intercept = -1, ar_trend = -1, ar_sin = -1, ar_cos = -1;
  int ar_log_rate = -1, ne_log_rate = -1;
  int en_intercept = -1, en_trend = -1, en_sin = -1, en_cos = -1, en_log_rate = -1;
  int tau1 = -1, tau2 = -1, alpha = -1, theta = -1, phi = -1;
  int re_ar = -1, re_ne = -1, re_en = -1;

  explicit BlockOffsets(const ParamLayout& layout) {
    auto look = [&](const char* name) {
      int b = layout.find(name);
      return b < 0 ? -1 : layout.offset(b);
    };
    ar_intercept = look("ar_intercept");
    ar_trend = look("ar_trend");
    ar_sin = look("ar_sin");
    ar_cos = look("ar_cos");
    ar_log_rate = look("ar_log_rate");
    ne_log_rate = look("ne_log_rate");
    en_intercept = look("en_intercept");
    en_trend = look("en_trend");
    en_sin = look("en_sin");
    en_cos = look("en_cos");
    en_log_rate = look("en_log_rate");
    tau1 = look("tau1");
    tau2 = look("tau2");
    alpha = look("alpha");
    theta = look("theta");
    phi = look("phi");
    re_ar = look("re_ar");
    re_ne = look("re_ne");
    re_en = look("re_en");
  }
};

struct Accumulator {
  double value = 0.0;
  std::vector<double>* grad = nullptr;

  void add(int offset, double g) {
    if (grad != nullptr && offset >= 0) (*grad)[offset] += g;
  }
};

bool bad(double x) { return !std::isfinite(x); }

/// EE family log-likelihood with optional gradient. Returns false when the
/// evaluation hit an out-of-support configuration (acc.value set to -inf).
bool accumulate_ee(const ModelContext& ctx, const ParamVector& p, Accumulator& acc) {
  const EeSpec& spec = ctx.ee;
  const SurveillancePanel& panel = *ctx.panel;
  const int n = panel.n_areas();
  const int T = panel.n_times();
  const BlockOffsets off(p.layout());

  WeightDerivs wd;
  if (spec.ne)
    wd = make_weight_derivs(effective_weights(spec.weights, p), *ctx.spatial, off.theta >= 0);

  const double phi = std::exp(p.raw(off.phi));
  if (bad(phi) || phi <= 0.0) return false;

  std::vector<double> exp_ar(n, 0.0), exp_ne(n, 0.0), exp_b_en(n, 1.0);
  if (spec.ar) {
    const double lam = p.raw(off.ar_log_rate);
    for (int i = 0; i < n; ++i) {
      exp_ar[i] = std::exp(lam + (spec.re_ar ? p.raw(off.re_ar + i) : 0.0));
      if (bad(exp_ar[i])) return false;
    }
  }
  if (spec.ne) {
    const double lam = p.raw(off.ne_log_rate);
    for (int i = 0; i < n; ++i) {
      exp_ne[i] = std::exp(lam + (spec.re_ne ? p.raw(off.re_ne + i) : 0.0));
      if (bad(exp_ne[i])) return false;
    }
  }
  if (spec.en && spec.re_en)
    for (int i = 0; i < n; ++i) {
      exp_b_en[i] = std::exp(p.raw(off.re_en + i));
      if (bad(exp_b_en[i])) return false;
    }
  const double omega = 2.0 * std::numbers::pi / spec.seasonal_period;

  std::vector<double> y_lag(n), G(n, 0.0), H(n, 0.0);
  for (int t = 2; t <= T; ++t) {
    for (int j = 0; j < n; ++j) y_lag[j] = static_cast<double>(panel.count(j, t - 1));
    if (spec.ne) {
      for (int i = 0; i < n; ++i) {
        double g = 0.0;
        for (int j = 0; j < n; ++j) g += wd.W(i, j) * y_lag[j];
        G[i] = g;
        if (wd.theta_free) {
          double h = 0.0;
          for (int j = 0; j < n; ++j) h += wd.wlog[i][j] * y_lag[j];
          H[i] = h;
        }
      }
    }
    const double sin_t = std::sin(omega * t), cos_t = std::cos(omega * t);
    double en_log = 0.0;
    if (spec.en) {
      en_log = p.raw(off.en_intercept);
      if (off.en_trend >= 0) en_log += p.raw(off.en_trend) * t;
      if (off.en_sin >= 0) en_log += p.raw(off.en_sin) * sin_t + p.raw(off.en_cos) * cos_t;
    }
    for (int i = 0; i < n; ++i) {
      const double ar = spec.ar ? exp_ar[i] * y_lag[i] : 0.0;
      const double ne = spec.ne ? exp_ne[i] * G[i] : 0.0;
      const double en =
          spec.en ? static_cast<double>(panel.population(i, t)) * std::exp(en_log) * exp_b_en[i]
                  : 0.0;
      const double mu = ar + ne + en;
      if (bad(mu)) return false;
      const long long y = panel.count(i, t);
      if (mu == 0.0 && y > 0) return false;
      acc.value += negbin_logpmf(y, {mu, phi});
      if (acc.grad == nullptr) continue;

      const CellDeriv d = negbin_derivs(y, mu, phi);
      acc.add(off.phi, d.dldr * phi);
      if (spec.ar) {
        acc.add(off.ar_log_rate, d.dldmu * ar);
        if (spec.re_ar) acc.add(off.re_ar + i, d.dldmu * ar);
      }
      if (spec.ne) {
        acc.add(off.ne_log_rate, d.dldmu * ne);
        if (spec.re_ne) acc.add(off.re_ne + i, d.dldmu * ne);
        if (wd.theta_free) {
          const double dG_drho = wd.c[i] * G[i] - H[i];
          acc.add(off.theta, d.dldmu * exp_ne[i] * dG_drho * wd.drho_draw);
        }
      }
      if (spec.en) {
        acc.add(off.en_intercept, d.dldmu * en);
        if (off.en_trend >= 0) acc.add(off.en_trend, d.dldmu * en * t);
        if (off.en_sin >= 0) {
          acc.add(off.en_sin, d.dldmu * en * sin_t);
          acc.add(off.en_cos, d.dldmu * en * cos_t);
        }
        if (spec.re_en) acc.add(off.re_en + i, d.dldmu * en);
      }
    }
  }
  return true;
}

bool accumulate_tsir(const ModelContext& ctx, const ParamVector& p, Accumulator& acc) {
  const TsirSpec& spec = ctx.tsir;
  const SurveillancePanel& panel = *ctx.panel;
  const int n = panel.n_areas();
  const int T = panel.n_times();
  const BlockOffsets off(p.layout());

  WeightDerivs wd =
      make_weight_derivs(effective_weights(spec.weights, p), *ctx.spatial, off.theta >= 0);

  const double phi = std::exp(p.raw(off.phi));
  if (bad(phi) || phi <= 0.0) return false;
  const double lam_ne = p.raw(off.ne_log_rate);
  const double exp_ne = std::exp(lam_ne);
  if (bad(exp_ne)) return false;
  const double exp_en = spec.include_endemic ? std::exp(p.raw(off.en_log_rate)) : 0.0;
  if (bad(exp_en)) return false;
  const double tau1 = off.tau1 >= 0 ? p.raw(off.tau1) : spec.tau1.value;
  const double tau2 = off.tau2 >= 0 ? p.raw(off.tau2) : spec.tau2.value;
  const double alpha_raw = p.raw(off.alpha);
  const double sig = sigmoid(alpha_raw);
  const double alpha = spec.alpha_lo + (spec.alpha_hi - spec.alpha_lo) * sig;
  const double dalpha_draw = (spec.alpha_hi - spec.alpha_lo) * sig * (1.0 - sig);
  const double omega = 2.0 * std::numbers::pi / spec.seasonal_period;

  std::vector<double> y_pow(n), y_pow_log(n), G(n), H(n, 0.0), Glog(n, 0.0);
  for (int t = 2; t <= T; ++t) {
    const double sin_t = std::sin(omega * t), cos_t = std::cos(omega * t);
    double ar_log = p.raw(off.ar_intercept);
    if (off.ar_trend >= 0) ar_log += p.raw(off.ar_trend) * t;
    if (off.ar_sin >= 0) ar_log += p.raw(off.ar_sin) * sin_t + p.raw(off.ar_cos) * cos_t;
    const double exp_ar = std::exp(ar_log);
    if (bad(exp_ar)) return false;

    for (int j = 0; j < n; ++j) {
      const double yj = static_cast<double>(panel.count(j, t - 1));
      y_pow[j] = yj > 0.0 ? std::pow(yj, tau2) : 0.0;
      y_pow_log[j] = yj > 0.0 ? y_pow[j] * std::log(yj) : 0.0;
    }
    for (int i = 0; i < n; ++i) {
      double g = 0.0, gl = 0.0, h = 0.0;
      for (int j = 0; j < n; ++j) {
        g += wd.W(i, j) * y_pow[j];
        if (off.tau2 >= 0) gl += wd.W(i, j) * y_pow_log[j];
        if (wd.theta_free) h += wd.wlog[i][j] * y_pow[j];
      }
      G[i] = g;
      Glog[i] = gl;
      H[i] = h;
    }

    for (int i = 0; i < n; ++i) {
      const double y_lag = static_cast<double>(panel.count(i, t - 1));
      const double pop_lag = static_cast<double>(panel.population(i, t - 1));
      const double pop_pow = std::pow(pop_lag, tau1);
      const double a = exp_ar * y_lag;
      const double b = exp_ne * pop_pow * G[i];
      const double base = a + b;
      const double sus_factor =
          spec.use_susceptibles ? (*ctx.susceptibles)[i][t - 2] / pop_lag : 1.0;
      const double epidemic = base > 0.0 ? std::pow(base, alpha) * sus_factor : 0.0;
      const double pop_now = static_cast<double>(panel.population(i, t));
      const double mu = epidemic + pop_now * exp_en;
      if (bad(mu)) return false;
      const long long y = panel.count(i, t);
      if (mu == 0.0 && y > 0) return false;
      acc.value += negbin_logpmf(y, {mu, phi});
      if (acc.grad == nullptr) continue;

      const CellDeriv d = negbin_derivs(y, mu, phi);
      acc.add(off.phi, d.dldr * phi);
      if (spec.include_endemic) acc.add(off.en_log_rate, d.dldmu * pop_now * exp_en);
      if (base > 0.0) {
        const double q = d.dldmu * alpha * std::pow(base, alpha - 1.0) * sus_factor;
        acc.add(off.ar_intercept, q * a);
        if (off.ar_trend >= 0) acc.add(off.ar_trend, q * a * t);
        if (off.ar_sin >= 0) {
          acc.add(off.ar_sin, q * a * sin_t);
          acc.add(off.ar_cos, q * a * cos_t);
        }
        acc.add(off.ne_log_rate, q * b);
        if (off.tau1 >= 0) acc.add(off.tau1, q * b * std::log(pop_lag));
        if (off.tau2 >= 0) acc.add(off.tau2, q * exp_ne * pop_pow * Glog[i]);
        if (wd.theta_free) {
          const double dG_drho = wd.c[i] * G[i] - H[i];
          acc.add(off.theta, q * exp_ne * pop_pow * dG_drho * wd.drho_draw);
        }
        acc.add(off.alpha,
                d.dldmu * std::pow(base, alpha) * std::log(base) * sus_factor * dalpha_draw);
      }
    }
  }
  return true;
}

double accumulate_loglik(const ModelContext& ctx, const ParamVector& p, Accumulator& acc) {
  const bool ok =
      ctx.family == Family::ee ? accumulate_ee(ctx, p, acc) : accumulate_tsir(ctx, p, acc);
  if (!ok || bad(acc.value)) {
    if (acc.grad != nullptr) std::fill(acc.grad->begin(), acc.grad->end(), 0.0);
    acc.value = kNegInf;
  }
  return acc.value;
}

}  // namespace

ModelContext ModelContext::for_tsir(const TsirSpec& spec, const SurveillancePanel& panel,
                                    const SpatialStructure& spatial,
                                    const std::vector<std::vector<double>>* susceptibles) {
  spec.validate();
  if (spec.use_susceptibles && susceptibles == nullptr)
    throw std::invalid_argument("tsir context: susceptibles requested but not supplied");
  ModelContext ctx;
  ctx.family = Family::tsir;
  ctx.tsir = spec;
  ctx.panel = &panel;
  ctx.spatial = &spatial;
  ctx.susceptibles = susceptibles;
  ctx.layout = ParamLayout::tsir(spec);
  return ctx;
}

ModelContext ModelContext::for_ee(const EeSpec& spec, const SurveillancePanel& panel,
                                  const SpatialStructure& spatial) {
  spec.validate();
  ModelContext ctx;
  ctx.family = Family::ee;
  ctx.ee = spec;
  ctx.panel = &panel;
  ctx.spatial = &spatial;
  ctx.layout = ParamLayout::ee(spec, panel.n_areas());
  return ctx;
}

int ModelContext::seasonal_period() const {
  return family == Family::ee ? ee.seasonal_period : tsir.seasonal_period;
}

const WeightScheme& ModelContext::weight_scheme() const {
  return family == Family::ee ? ee.weights : tsir.weights;
}

double loglik(const ModelContext& ctx, const ParamVector& params) {
  Accumulator acc;
  return accumulate_loglik(ctx, params, acc);
}

double logprior_with_grad(const ModelContext& ctx, const PriorSpec& priors,
                          const ParamVector& p, std::vector<double>* grad) {
  const ParamLayout& layout = p.layout();
  double lp = 0.0;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  auto add = [&](int offset, double g) {
    if (grad != nullptr) (*grad)[offset] += g;
  };

  for (int b = 0; b < layout.n_blocks(); ++b) {
    const ParamBlock& block = layout.block(b);
    const int off = layout.offset(b);
    if (block.random_effect) {
      // b_i ~ Normal(0, sigma^2) with sigma from the paired log-scale block
      const double s = p.get_raw(block.sigma_block);
      const double inv_var = std::exp(-2.0 * s);
      double sumsq = 0.0;
      for (int i = 0; i < block.size; ++i) {
        const double bi = p.raw(off + i);
        sumsq += bi * bi;
        add(off + i, -bi * inv_var);
      }
      lp += -0.5 * sumsq * inv_var - block.size * (s + half_log_2pi);
      const int s_off = layout.offset_of(block.sigma_block);
      add(s_off, sumsq * inv_var - block.size);
      continue;
    }
    if (block.name.rfind("sigma_", 0) == 0) {
      // precision e^{-2s} ~ Gamma(shape, rate), with the Jacobian of s -> tau
      const double a = priors.re_precision_shape, r = priors.re_precision_rate;
      const double s = p.raw(off);
      const double tau = std::exp(-2.0 * s);
      lp += a * std::log(r) - std::lgamma(a) + (a - 1.0) * (-2.0 * s) - r * tau +
            std::log(2.0) - 2.0 * s;
      add(off, -2.0 * a + 2.0 * r * tau);
      continue;
    }
    switch (block.transform) {
      case Transform::identity: {
        const double sd = priors.normal_sd_fixed;
        const double x = p.raw(off);
        lp += -0.5 * x * x / (sd * sd) - std::log(sd) - half_log_2pi;
        add(off, -x / (sd * sd));
        break;
      }
      case Transform::log_scale: {  // phi
        const double x = p.raw(off);
        const double sd = priors.logphi_sd, m = priors.logphi_mean;
        lp += -0.5 * (x - m) * (x - m) / (sd * sd) - std::log(sd) - half_log_2pi;
        add(off, -(x - m) / (sd * sd));
        break;
      }
      case Transform::logit_unit:
      case Transform::logit_interval: {
        // uniform prior over the support; only the transform Jacobian remains
        const double sg = sigmoid(p.raw(off));
        lp += std::log(sg) + std::log1p(-sg);
        add(off, 1.0 - 2.0 * sg);
        break;
      }
    }
  }
  return lp;
}

double logposterior(const ModelContext& ctx, const PriorSpec& priors,
                    const ParamVector& params) {
  return logposterior_with_grad(ctx, priors, params, nullptr);
}

double logposterior_with_grad(const ModelContext& ctx, const PriorSpec& priors,
                              const ParamVector& params, std::vector<double>* grad) {
  if (grad != nullptr) {
    grad->assign(params.dim(), 0.0);
  }
  Accumulator acc;
  acc.grad = grad;
  accumulate_loglik(ctx, params, acc);
  if (acc.value == kNegInf) return kNegInf;
  return acc.value + logprior_with_grad(ctx, priors, params, grad);
}

std::vector<std::vector<double>> fitted_means(const ModelContext& ctx,
                                              const ParamVector& params) {
  const SurveillancePanel& panel = *ctx.panel;
  const int n = panel.n_areas(), T = panel.n_times();
  std::vector<std::vector<double>> mu(n, std::vector<double>(T - 1, 0.0));
  if (ctx.family == Family::ee) {
    WeightMatrix w;
    if (ctx.ee.ne) w = build_weights(effective_weights(ctx.ee.weights, params), *ctx.spatial);
    EeMeanEval eval(ctx.ee, params, panel, w);
    for (int t = 2; t <= T; ++t)
      for (int i = 0; i < n; ++i) mu[i][t - 2] = eval.at(t, i);
  } else {
    WeightMatrix w = build_weights(effective_weights(ctx.tsir.weights, params), *ctx.spatial);
    TsirMeanEval eval(ctx.tsir, params, panel, w, ctx.susceptibles);
    for (int t = 2; t <= T; ++t)
      for (int i = 0; i < n; ++i) mu[i][t - 2] = eval.at(t, i);
  }
  return mu;
}

}  // namespace epicount

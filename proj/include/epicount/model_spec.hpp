#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "epicount/weights.hpp"

namespace epicount {

enum class Family { tsir, ee };

/// A scalar model quantity that is either held at a fixed value or estimated
/// (with `value` as the starting point).
struct FreeOrFixed {
  bool free = false;
  double value = 1.0;
};

/// TSIR-family mean model: seasonality in the autoregressive log-rate,
/// gravity-style neighbor term over distance power-law weights, optional
/// endemic term, and a mixing power alpha restricted to an interval.
struct TsirSpec {
  bool include_endemic = true;
  bool ar_trend = true;
  bool ar_seasonality = true;
  FreeOrFixed tau1;  // gravity exponent on population
  FreeOrFixed tau2;  // gravity exponent on lagged neighbor counts
  double alpha_lo = 0.95;
  double alpha_hi = 1.0;
  int seasonal_period = 52;
  WeightScheme weights{WeightKind::distance_power_law, 0.5};
  /// When true the epidemic term is multiplied by x_{i,t-1}/N_i with
  /// reconstructed susceptibles supplied by the caller; the default
  /// approximates susceptibles by the population.
  bool use_susceptibles = false;

  void validate() const;
};

/// Epidemic/endemic mean model: additive self-area, neighbor and endemic
/// hazards with optional per-area random effects, trend and seasonality in
/// the endemic log-rate, and graph power-law neighbor weights.
struct EeSpec {
  bool ar = true;
  bool ne = true;
  bool en = true;
  bool re_ar = false;
  bool re_ne = false;
  bool re_en = false;
  bool endemic_trend = true;
  bool endemic_seasonality = true;
  int seasonal_period = 52;
  WeightScheme weights{WeightKind::graph_power_law, 0.5};

  void validate() const;
};

/// Hyperparameters of the default priors.
struct PriorSpec {
  double normal_sd_fixed = 10.0;    // zero-mean normal on fixed effects
  double re_precision_shape = 0.5;  // gamma prior on random-effect precisions
  double re_precision_rate = 0.1;
  double logphi_mean = 0.0;  // weakly informative normal on log overdispersion
  double logphi_sd = 10.0;
  // theta and alpha carry uniform priors over their supports.
};

enum class Transform { identity, log_scale, logit_unit, logit_interval };

struct ParamBlock {
  std::string name;
  int size = 1;
  Transform transform = Transform::identity;
  double lo = 0.0, hi = 1.0;    // logit_interval bounds
  bool random_effect = false;   // true for per-area effect blocks
  std::string sigma_block;      // name of the paired scale block (random effects)

  bool operator==(const ParamBlock&) const = default;
};

/// Stable, spec-determined ordering of named parameter blocks. The layout
/// fixes both the optimizer vector and the serialization order.
class ParamLayout {
 public:
  static ParamLayout tsir(const TsirSpec& spec);
  static ParamLayout ee(const EeSpec& spec, int n_areas);

  int dim() const { return dim_; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  const ParamBlock& block(int b) const { return blocks_[b]; }
  int offset(int b) const { return offsets_[b]; }

  int find(const std::string& name) const;  // -1 when absent
  bool has(const std::string& name) const { return find(name) >= 0; }
  int offset_of(const std::string& name) const;

  bool operator==(const ParamLayout&) const = default;

 private:
  void push(ParamBlock block);

  std::vector<ParamBlock> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

double transform_forward(Transform t, double raw, double lo, double hi);
double transform_backward(Transform t, double natural, double lo, double hi);

/// Parameter values stored on the unconstrained (transformed) scale, with
/// named natural-scale access.
class ParamVector {
 public:
  explicit ParamVector(ParamLayout layout)
      : layout_(std::move(layout)), x_(layout_.dim(), 0.0) {}

  const ParamLayout& layout() const { return layout_; }
  int dim() const { return layout_.dim(); }

  double raw(int idx) const { return x_[idx]; }
  double& raw(int idx) { return x_[idx]; }
  const std::vector<double>& raw_values() const { return x_; }
  std::vector<double>& raw_values() { return x_; }

  double get_raw(const std::string& name, int i = 0) const;
  void set_raw(const std::string& name, double value, int i = 0);

  /// Natural-scale access (applies the block transform).
  double get(const std::string& name, int i = 0) const;
  void set(const std::string& name, double natural_value, int i = 0);

  /// Natural-scale named serialization; random-effect blocks as arrays.
  nlohmann::json to_json() const;
  static ParamVector from_json(const ParamLayout& layout, const nlohmann::json& j);

  bool operator==(const ParamVector&) const = default;

 private:
  ParamLayout layout_;
  std::vector<double> x_;
};

/// Scheme with the decay parameter taken from the parameter vector when the
/// layout carries a free theta.
WeightScheme effective_weights(const WeightScheme& scheme, const ParamVector& params);

TsirSpec tsir_spec_from_json(const nlohmann::json& j);
EeSpec ee_spec_from_json(const nlohmann::json& j);
PriorSpec prior_spec_from_json(const nlohmann::json& j);
nlohmann::json tsir_spec_to_json(const TsirSpec& spec);
nlohmann::json ee_spec_to_json(const EeSpec& spec);

}  // namespace epicount

#pragma once

#include <string>
#include <vector>

#include "epicount/spatial.hpp"

namespace epicount {

enum class WeightKind { distance_power_law, graph_power_law, binary_contiguity, uniform };

const char* weight_kind_name(WeightKind kind);
WeightKind weight_kind_from_name(const std::string& name);

/// Named coupling scheme. theta in (0,1) reparameterizes the power-law decay
/// rho = theta/(1-theta); it is ignored by the non-power-law kinds.
struct WeightScheme {
  WeightKind kind = WeightKind::uniform;
  double theta = 0.5;

  bool has_decay() const {
    return kind == WeightKind::distance_power_law || kind == WeightKind::graph_power_law;
  }
  double rho() const { return theta / (1.0 - theta); }
};

/// Row-normalized coupling weights, zero diagonal. Rows with no reachable
/// neighbor are all zero and noted in `warnings`.
struct WeightMatrix {
  std::vector<std::vector<double>> w;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(w.size()); }
  double operator()(int i, int j) const { return w[i][j]; }
};

/// Builds the weight matrix for a scheme:
///   distance_power_law: w_ij proportional to d_ij^-rho
///   graph_power_law:    w_ij proportional to m_ij^-rho
///   binary_contiguity:  w_ij proportional to 1{m_ij = 1}
///   uniform:            w_ij = 1/(n-1)
/// each row is normalized to sum to one.
WeightMatrix build_weights(const WeightScheme& scheme, const SpatialStructure& spatial);

void write_weights_csv(const WeightMatrix& w, const std::vector<std::string>& areas,
                       std::ostream& out);

}  // namespace epicount

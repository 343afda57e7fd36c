#include "epicount/weights.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace epicount {

const char* weight_kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::distance_power_law: return "distance_power_law";
    case WeightKind::graph_power_law: return "graph_power_law";
    case WeightKind::binary_contiguity: return "binary_contiguity";
    case WeightKind::uniform: return "uniform";
  }
  return "?";
}

WeightKind weight_kind_from_name(const std::string& name) {
  if (name == "distance_power_law") return WeightKind::distance_power_law;
  if (name == "graph_power_law") return WeightKind::graph_power_law;
  if (name == "binary_contiguity") return WeightKind::binary_contiguity;
  if (name == "uniform") return WeightKind::uniform;
  throw std::invalid_argument("unknown weight scheme '" + name + "'");
}

WeightMatrix build_weights(const WeightScheme& scheme, const SpatialStructure& spatial) {
  const int n = spatial.n_areas();
  if (n < 2) throw std::invalid_argument("build_weights: need at least 2 areas");
  if (scheme.has_decay() && !(scheme.theta > 0.0 && scheme.theta < 1.0))
    throw std::invalid_argument("build_weights: theta must lie strictly in (0,1)");

  const bool needs_distances = scheme.kind == WeightKind::distance_power_law;
  const bool needs_orders = scheme.kind == WeightKind::graph_power_law ||
                            scheme.kind == WeightKind::binary_contiguity;
  if (needs_distances && !spatial.has_distances())
    throw std::invalid_argument("build_weights: scheme requires distances");
  if (needs_orders && !spatial.has_adjacency())
    throw std::invalid_argument("build_weights: scheme requires adjacency");

  WeightMatrix result;
  result.w.assign(n, std::vector<double>(n, 0.0));
  const double rho = scheme.has_decay() ? scheme.rho() : 0.0;

  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double u = 0.0;
      switch (scheme.kind) {
        case WeightKind::uniform:
          u = 1.0;
          break;
        case WeightKind::binary_contiguity:
          u = spatial.order(i, j) == 1 ? 1.0 : 0.0;
          break;
        case WeightKind::distance_power_law: {
          double d = spatial.distance(i, j);
          if (d == 0.0)
            throw std::invalid_argument("build_weights: zero distance between distinct areas " +
                                        spatial.areas()[i] + " and " + spatial.areas()[j]);
          u = std::pow(d, -rho);
          break;
        }
        case WeightKind::graph_power_law: {
          int m = spatial.order(i, j);
          u = m == kUnreachable ? 0.0 : std::pow(static_cast<double>(m), -rho);
          break;
        }
      }
      result.w[i][j] = u;
      row_sum += u;
    }
    if (row_sum > 0.0) {
      for (int j = 0; j < n; ++j) result.w[i][j] /= row_sum;
    } else {
      result.warnings.push_back("area '" + spatial.areas()[i] +
                                "' has no reachable neighbor; weight row left at zero");
    }
  }
  return result;
}

void write_weights_csv(const WeightMatrix& w, const std::vector<std::string>& areas,
                       std::ostream& out) {
  out << "area";
  for (const auto& a : areas) out << ',' << a;
  out << '\n';
  char buf[32];
  for (int i = 0; i < w.size(); ++i) {
    out << areas[i];
    for (int j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", w.w[i][j]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace epicount

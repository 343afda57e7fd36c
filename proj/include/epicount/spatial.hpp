#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace epicount {

/// Sentinel for pairs not connected in the adjacency graph.
inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// All-pairs shortest path lengths over a symmetric adjacency matrix with
/// unit edge weights; kUnreachable marks disconnected pairs.
std::vector<std::vector<int>> graph_order(const std::vector<std::vector<bool>>& adjacency);

/// Pairwise distances and/or adjacency between areas, with the derived
/// graph-order matrix. Immutable after construction.
class SpatialStructure {
 public:
  SpatialStructure(std::vector<std::string> areas,
                   std::vector<std::vector<double>> distances,    // empty if absent
                   std::vector<std::vector<bool>> adjacency);     // empty if absent

  int n_areas() const { return static_cast<int>(areas_.size()); }
  const std::vector<std::string>& areas() const { return areas_; }

  bool has_distances() const { return !distances_.empty(); }
  bool has_adjacency() const { return !adjacency_.empty(); }
  double distance(int i, int j) const { return distances_[i][j]; }
  bool adjacent(int i, int j) const { return adjacency_[i][j]; }
  int order(int i, int j) const { return graph_order_[i][j]; }

  const std::vector<std::vector<double>>& distances() const { return distances_; }
  const std::vector<std::vector<int>>& orders() const { return graph_order_; }
  bool connected() const { return connected_; }

  static SpatialStructure from_json(const nlohmann::json& j);
  static SpatialStructure load(const std::string& path);
  nlohmann::json to_json() const;

 private:
  std::vector<std::string> areas_;
  std::vector<std::vector<double>> distances_;
  std::vector<std::vector<bool>> adjacency_;
  std::vector<std::vector<int>> graph_order_;
  bool connected_ = true;
};

}  // namespace epicount

#include "epicount/spatial.hpp"

#include <deque>
#include <fstream>
#include <stdexcept>

namespace epicount {

std::vector<std::vector<int>> graph_order(const std::vector<std::vector<bool>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(adjacency[i].size()) != n)
      throw std::invalid_argument("graph_order: adjacency must be square");
    if (adjacency[i][i]) throw std::invalid_argument("graph_order: diagonal must be false");
    for (int j = 0; j < n; ++j)
      if (adjacency[i][j] != adjacency[j][i])
        throw std::invalid_argument("graph_order: asymmetric adjacency at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
  }
  std::vector<std::vector<int>> m(n, std::vector<int>(n, kUnreachable));
  for (int s = 0; s < n; ++s) {
    // BFS with unit edge weights
    m[s][s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v)
        if (adjacency[u][v] && m[s][v] == kUnreachable) {
          m[s][v] = m[s][u] + 1;
          queue.push_back(v);
        }
    }
  }
  return m;
}

SpatialStructure::SpatialStructure(std::vector<std::string> areas,
                                   std::vector<std::vector<double>> distances,
                                   std::vector<std::vector<bool>> adjacency)
    : areas_(std::move(areas)),
      distances_(std::move(distances)),
      adjacency_(std::move(adjacency)) {
  const int n = n_areas();
  if (n < 1) throw std::invalid_argument("spatial: no areas");
  if (distances_.empty() && adjacency_.empty())
    throw std::invalid_argument("spatial: need distances or adjacency");
  if (!distances_.empty()) {
    if (static_cast<int>(distances_.size()) != n)
      throw std::invalid_argument("spatial: distances size mismatch");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(distances_[i].size()) != n)
        throw std::invalid_argument("spatial: distances must be square");
      if (distances_[i][i] != 0.0)
        throw std::invalid_argument("spatial: nonzero distance diagonal at " + areas_[i]);
      for (int j = 0; j < n; ++j) {
        if (distances_[i][j] < 0.0)
          throw std::invalid_argument("spatial: negative distance at (" + areas_[i] + "," +
                                      areas_[j] + ")");
        if (distances_[i][j] != distances_[j][i])
          throw std::invalid_argument("spatial: asymmetric distances at (" + areas_[i] + "," +
                                      areas_[j] + ")");
      }
    }
  }
  if (!adjacency_.empty()) {
    graph_order_ = graph_order(adjacency_);  // validates symmetry and diagonal
    for (int i = 0; i < n && connected_; ++i)
      for (int j = 0; j < n; ++j)
        if (graph_order_[i][j] == kUnreachable) {
          connected_ = false;
          break;
        }
  }
}

SpatialStructure SpatialStructure::from_json(const nlohmann::json& j) {
  if (!j.contains("areas")) throw std::invalid_argument("spatial json: missing 'areas'");
  std::vector<std::string> areas = j.at("areas").get<std::vector<std::string>>();
  std::vector<std::vector<double>> distances;
  std::vector<std::vector<bool>> adjacency;
  if (j.contains("distances"))
    distances = j.at("distances").get<std::vector<std::vector<double>>>();
  if (j.contains("adjacency"))
    adjacency = j.at("adjacency").get<std::vector<std::vector<bool>>>();
  return SpatialStructure(std::move(areas), std::move(distances), std::move(adjacency));
}

SpatialStructure SpatialStructure::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json SpatialStructure::to_json() const {
  nlohmann::json j;
  j["areas"] = areas_;
  if (has_distances()) j["distances"] = distances_;
  if (has_adjacency()) j["adjacency"] = adjacency_;
  return j;
}

}  // namespace epicount

#include "fixture.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "epicount/rng.hpp"
#include "epicount/simulate.hpp"

namespace epicount::testsupport {

namespace {

constexpr int kAreas = 17;
constexpr int kWeeks = 104;
constexpr std::uint64_t kFixtureSeed = 20;

const double kX[kAreas] = {0.0, 2.0, 4.0, 6.0, 0.5, 2.5, 4.5, 6.5, 1.0,
                           3.0, 5.0, 7.0, 1.5, 3.5, 5.5, 2.0, 4.5};
const double kY[kAreas] = {0.0, 0.5, 0.0, 0.5, 2.0, 2.2, 2.0, 2.3, 4.0,
                           4.2, 4.0, 4.3, 6.0, 6.2, 6.0, 8.0, 8.2};

const int kEdges[][2] = {{1, 2},   {2, 3},   {3, 4},   {1, 5},   {2, 6},   {3, 7},
                         {4, 8},   {5, 6},   {6, 7},   {7, 8},   {5, 9},   {6, 10},
                         {7, 11},  {8, 12},  {9, 10},  {10, 11}, {11, 12}, {9, 13},
                         {10, 14}, {11, 15}, {12, 15}, {13, 14}, {14, 15}, {13, 16},
                         {14, 17}, {16, 17}, {15, 17}};

const long long kPopulations[kAreas] = {132000, 245000,  88000, 157000, 301000, 176000,
                                        95000,  210000, 143000, 257000, 119000, 184000,
                                        76000,  228000, 162000,  54000,  69000};

}  // namespace

SpatialStructure make_fixture_spatial() {
  std::vector<std::string> areas;
  for (int i = 1; i <= kAreas; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "D%02d", i);
    areas.emplace_back(buf);
  }
  std::vector<std::vector<double>> distances(kAreas, std::vector<double>(kAreas, 0.0));
  for (int i = 0; i < kAreas; ++i)
    for (int j = 0; j < kAreas; ++j) {
      if (i == j) continue;
      const double dx = kX[i] - kX[j], dy = kY[i] - kY[j];
      distances[i][j] = std::round(std::sqrt(dx * dx + dy * dy) * 100.0) / 10.0;  // km
    }
  std::vector<std::vector<bool>> adjacency(kAreas, std::vector<bool>(kAreas, false));
  for (const auto& e : kEdges) {
    adjacency[e[0] - 1][e[1] - 1] = true;
    adjacency[e[1] - 1][e[0] - 1] = true;
  }
  return SpatialStructure(std::move(areas), std::move(distances), std::move(adjacency));
}

Fixture make_measles_fixture() {
  SpatialStructure spatial = make_fixture_spatial();

  EeSpec spec;
  spec.ar = spec.ne = spec.en = true;
  spec.re_ar = spec.re_ne = spec.re_en = true;
  spec.endemic_trend = true;
  spec.endemic_seasonality = true;
  spec.seasonal_period = 52;
  spec.weights = {WeightKind::graph_power_law, 0.8};

  ParamVector truth(ParamLayout::ee(spec, kAreas));
  truth.set("ar_log_rate", std::log(0.45));
  truth.set("ne_log_rate", std::log(0.22));
  truth.set("en_intercept", -13.0);
  truth.set("en_trend", -0.002);
  truth.set("en_sin", 0.8);
  truth.set("en_cos", 0.4);
  truth.set("theta", 0.8);
  truth.set("phi", 2.0);
  truth.set("sigma_ar", 0.4);
  truth.set("sigma_ne", 0.6);
  truth.set("sigma_en", 0.5);

  auto rng = child_rng(kFixtureSeed, 99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < kAreas; ++i) {
    truth.set_raw("re_ar", 0.4 * normal(rng), i);
    truth.set_raw("re_ne", 0.6 * normal(rng), i);
    truth.set_raw("re_en", 0.5 * normal(rng), i);
  }
  // two quiet districts on the northern edge
  for (int i : {15, 16}) {
    truth.set_raw("re_ar", -2.0, i);
    truth.set_raw("re_ne", -8.0, i);
    truth.set_raw("re_en", -8.0, i);
  }

  std::vector<std::vector<long long>> init_counts(kAreas, std::vector<long long>(1, 0));
  init_counts[2][0] = 4;
  init_counts[6][0] = 3;
  init_counts[9][0] = 5;
  init_counts[0][0] = 1;
  init_counts[13][0] = 2;
  std::vector<std::vector<long long>> pops(kAreas);
  for (int i = 0; i < kAreas; ++i) pops[i] = {kPopulations[i]};

  SurveillancePanel init(spatial.areas(), init_counts, pops, 52);
  SimResult sim = simulate_ee(spec, truth, init, spatial, kWeeks, kFixtureSeed);

  SurveillancePanel panel(spatial.areas(), sim.counts, pops, 52);
  return Fixture{std::move(panel), std::move(spatial), spec, truth};
}

std::string write_fixture_files(const Fixture& fixture, const std::string& dir) {
  std::filesystem::create_directories(dir);
  fixture.panel.write_counts_csv(dir + "/counts.csv");
  fixture.panel.write_populations_csv(dir + "/populations.csv");
  std::ofstream out(dir + "/spatial.json");
  out << fixture.spatial.to_json().dump(2) << "\n";
  return dir;
}

}  // namespace epicount::testsupport

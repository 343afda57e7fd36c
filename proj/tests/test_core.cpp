#include <doctest.h>

#include <random>

#include "epicount/panel.hpp"
#include "epicount/spatial.hpp"
#include "epicount/weights.hpp"
#include "support/fixture.hpp"
#include "support/tempdir.hpp"

using namespace epicount;
using testsupport::TempDir;

TEST_CASE("panel accepts an all-zero 2x3 grid") {
  SurveillancePanel panel({"a", "b"}, {{0, 0, 0}, {0, 0, 0}}, {{100}, {200}});
  CHECK(panel.n_areas() == 2);
  CHECK(panel.n_times() == 3);
  CHECK(panel.count(1, 3) == 0);
  CHECK(panel.population(0, 2) == 100);
}

TEST_CASE("panel rejects negative counts naming the cell") {
  CHECK_THROWS_WITH_AS(SurveillancePanel({"a"}, {{1, -1, 0}}, {{10}}),
                       doctest::Contains("area 'a', time 2"), std::invalid_argument);
}

TEST_CASE("panel rejects ragged counts and zero populations") {
  CHECK_THROWS_AS(SurveillancePanel({"a", "b"}, {{1, 2}, {1}}, {{10}, {10}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SurveillancePanel({"a"}, {{1}}, {{0}}), std::invalid_argument);
}

TEST_CASE("load_panel parses the documented CSV formats") {
  TempDir dir;
  auto counts = dir.write("c.csv",
                          "area,time,count\n"
                          "north,3,5\nnorth,1,0\nnorth,2,1\n"
                          "south,1,2\nsouth,2,0\nsouth,3,4\n");
  auto pops = dir.write("p.csv", "area,population\nnorth,1000\nsouth,2500\n");
  auto panel = SurveillancePanel::load(counts, pops, 52);
  CHECK(panel.n_areas() == 2);
  CHECK(panel.n_times() == 3);
  // time labels re-based in ascending order
  CHECK(panel.count(0, 3) == 5);
  CHECK(panel.count(1, 1) == 2);
  CHECK(panel.periods_per_year() == 52);

  SUBCASE("negative count diagnostics name the offending cell") {
    auto bad = dir.write("bad.csv", "area,time,count\nnorth,1,-1\n");
    CHECK_THROWS_WITH_AS(SurveillancePanel::load(bad, pops),
                         doctest::Contains("area 'north', time 1"), std::invalid_argument);
  }
  SUBCASE("duplicate (area,time) rows are rejected") {
    auto dup = dir.write("dup.csv", "area,time,count\nnorth,1,1\nnorth,1,2\n");
    CHECK_THROWS_WITH_AS(SurveillancePanel::load(dup, pops), doctest::Contains("duplicate"),
                         std::invalid_argument);
  }
  SUBCASE("missing cells are reported as ragged") {
    auto ragged = dir.write("ragged.csv",
                            "area,time,count\nnorth,1,1\nnorth,2,1\nsouth,1,0\n");
    CHECK_THROWS_WITH_AS(SurveillancePanel::load(ragged, pops), doctest::Contains("ragged"),
                         std::invalid_argument);
  }
  SUBCASE("unknown area in populations is rejected") {
    auto unknown = dir.write("unknown.csv", "area,population\nnorth,10\neast,20\n");
    CHECK_THROWS_WITH_AS(SurveillancePanel::load(counts, unknown),
                         doctest::Contains("unknown area 'east'"), std::invalid_argument);
  }
  SUBCASE("counts must be exact integers") {
    auto frac = dir.write("frac.csv", "area,time,count\nnorth,1,1.5\n");
    CHECK_THROWS_AS(SurveillancePanel::load(frac, pops), std::invalid_argument);
  }
}

TEST_CASE("births attach with the counts shape") {
  SurveillancePanel panel({"a"}, {{1, 2, 3}}, {{10}});
  panel.attach_births({{5, 5, 5}}, 1);
  CHECK(panel.has_births());
  CHECK(panel.births(0, 2) == 5);
  CHECK(panel.maternal_lag() == 1);
  CHECK_THROWS_AS(panel.attach_births({{1, 2}}, 0), std::invalid_argument);
}

TEST_CASE("measles-like fixture has the expected layout") {
  auto fixture = testsupport::make_measles_fixture();
  CHECK(fixture.panel.n_areas() == 17);
  CHECK(fixture.panel.n_times() == 104);
  int zero_areas = 0;
  long long total = 0;
  for (int i = 0; i < 17; ++i) {
    long long area_total = 0;
    for (int t = 1; t <= 104; ++t) area_total += fixture.panel.count(i, t);
    if (area_total == 0) ++zero_areas;
    total += area_total;
  }
  CHECK(zero_areas == 2);
  CHECK(total > 100);

  SUBCASE("file round trip via load_panel") {
    TempDir dir;
    testsupport::write_fixture_files(fixture, dir.str());
    auto reloaded =
        SurveillancePanel::load(dir.file("counts.csv"), dir.file("populations.csv"), 52);
    CHECK(reloaded == fixture.panel);
  }
}

TEST_CASE("load-serialize-load round trips with per-time populations and births") {
  TempDir dir;
  SurveillancePanel panel({"a", "b"}, {{1, 0, 2}, {3, 4, 0}},
                          {{10, 11, 12}, {20, 20, 21}}, 26);
  panel.attach_births({{1, 1, 0}, {0, 2, 2}}, 2);
  panel.write_counts_csv(dir.file("c.csv"));
  panel.write_populations_csv(dir.file("p.csv"));
  panel.write_births_csv(dir.file("b.csv"));
  auto reloaded = SurveillancePanel::load(dir.file("c.csv"), dir.file("p.csv"), 26);
  reloaded.load_births(dir.file("b.csv"), 2);
  CHECK(reloaded == panel);
}

TEST_CASE("graph order on the path graph a-b-c") {
  auto m = graph_order({{false, true, false}, {true, false, true}, {false, true, false}});
  CHECK(m[0][2] == 2);
  CHECK(m[0][1] == 1);
  CHECK(m[0][0] == 0);
}

TEST_CASE("graph order on the complete graph K4") {
  std::vector<std::vector<bool>> adj(4, std::vector<bool>(4, true));
  for (int i = 0; i < 4; ++i) adj[i][i] = false;
  auto m = graph_order(adj);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m[i][j] == (i == j ? 0 : 1));
}

TEST_CASE("disconnected pairs get the unreachable sentinel") {
  auto m = graph_order({{false, true, false, false},
                        {true, false, false, false},
                        {false, false, false, true},
                        {false, false, true, false}});
  CHECK(m[0][2] == kUnreachable);
  CHECK(m[1][3] == kUnreachable);
  CHECK(m[2][3] == 1);
}

TEST_CASE("asymmetric adjacency is rejected") {
  CHECK_THROWS_AS(graph_order({{false, true}, {false, false}}), std::invalid_argument);
}

namespace {

// independent oracle: Floyd-Warshall over the same adjacency
std::vector<std::vector<long long>> floyd_warshall(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  const long long inf = 1 << 20;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj[i][j]) d[i][j] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

std::vector<std::vector<bool>> random_adjacency(int n, double edge_prob, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(edge_prob);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) adj[i][j] = adj[j][i] = true;
  return adj;
}

}  // namespace

TEST_CASE("graph order matches Floyd-Warshall and satisfies the triangle inequality") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_real_distribution<double> prob(0.1, 0.9);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = size(rng);
    auto adj = random_adjacency(n, prob(rng), rng);
    auto m = graph_order(adj);
    auto oracle = floyd_warshall(adj);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (oracle[i][j] >= (1 << 20)) {
          CHECK(m[i][j] == kUnreachable);
        } else {
          CHECK(m[i][j] == oracle[i][j]);
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (m[i][j] == kUnreachable || m[j][k] == kUnreachable || m[i][k] == kUnreachable)
            continue;
          CHECK(m[i][k] <= m[i][j] + m[j][k]);
        }
  }
}

TEST_CASE("spatial json round trip and validation") {
  nlohmann::json j = {{"areas", {"a", "b", "c"}},
                      {"distances", {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.5}, {2.0, 1.5, 0.0}}},
                      {"adjacency",
                       {{false, true, false}, {true, false, true}, {false, true, false}}}};
  auto spatial = SpatialStructure::from_json(j);
  CHECK(spatial.n_areas() == 3);
  CHECK(spatial.order(0, 2) == 2);
  CHECK(spatial.distance(0, 2) == 2.0);
  auto round = SpatialStructure::from_json(spatial.to_json());
  CHECK(round.orders() == spatial.orders());

  j["distances"][0][1] = 9.0;  // asymmetric
  CHECK_THROWS_AS(SpatialStructure::from_json(j), std::invalid_argument);
}

TEST_CASE("uniform weights on three areas") {
  auto spatial = SpatialStructure::from_json(
      {{"areas", {"a", "b", "c"}},
       {"distances", {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}}}});
  auto w = build_weights({WeightKind::uniform}, spatial);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(w(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
}

TEST_CASE("distance power law weights: hand-normalized line") {
  // areas on a line, d(1,2)=1, d(1,3)=2, theta=1/2 so rho=1
  auto spatial = SpatialStructure::from_json(
      {{"areas", {"a", "b", "c"}},
       {"distances", {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}}}});
  auto w = build_weights({WeightKind::distance_power_law, 0.5}, spatial);
  CHECK(w(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(w(0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("zero distance between distinct areas is singular") {
  auto spatial = SpatialStructure::from_json(
      {{"areas", {"a", "b"}}, {"distances", {{0.0, 0.0}, {0.0, 0.0}}}});
  CHECK_THROWS_AS(build_weights({WeightKind::distance_power_law, 0.5}, spatial),
                  std::invalid_argument);
}

namespace {

SpatialStructure random_spatial(int n, std::mt19937_64& rng, double edge_prob = 0.5) {
  std::vector<std::string> areas;
  for (int i = 0; i < n; ++i) areas.push_back("r" + std::to_string(i));
  std::uniform_real_distribution<double> dist(0.5, 10.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = dist(rng);
  auto adj = random_adjacency(n, edge_prob, rng);
  return SpatialStructure(std::move(areas), std::move(d), std::move(adj));
}

}  // namespace

TEST_CASE("row sums are one for every scheme on random structures") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(2, 10);
  std::uniform_real_distribution<double> theta_dist(0.05, 0.95);
  const WeightKind kinds[] = {WeightKind::uniform, WeightKind::binary_contiguity,
                              WeightKind::distance_power_law, WeightKind::graph_power_law};
  for (int rep = 0; rep < 250; ++rep) {
    auto spatial = random_spatial(size(rng), rng);
    for (WeightKind kind : kinds) {
      auto w = build_weights({kind, theta_dist(rng)}, spatial);
      for (int i = 0; i < w.size(); ++i) {
        double sum = 0.0;
        bool positive = false;
        for (int j = 0; j < w.size(); ++j) {
          CHECK(w(i, j) >= 0.0);
          sum += w(i, j);
          if (w(i, j) > 0.0) positive = true;
        }
        CHECK(w(i, i) == 0.0);
        if (positive) CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("theta near 1 concentrates graph weights on first-order neighbors") {
  auto fixture_spatial = testsupport::make_fixture_spatial();
  auto sharp = build_weights({WeightKind::graph_power_law, 0.999}, fixture_spatial);
  auto binary = build_weights({WeightKind::binary_contiguity}, fixture_spatial);
  for (int i = 0; i < sharp.size(); ++i)
    for (int j = 0; j < sharp.size(); ++j)
      CHECK(std::abs(sharp(i, j) - binary(i, j)) < 1e-3);
}

TEST_CASE("theta near 0 recovers uniform weights") {
  std::mt19937_64 rng(13);
  auto spatial = random_spatial(6, rng, 1.0);  // complete graph: all pairs reachable
  auto near_zero = build_weights({WeightKind::graph_power_law, 1e-6}, spatial);
  auto uniform = build_weights({WeightKind::uniform}, spatial);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(near_zero(i, j) - uniform(i, j)) < 1e-6);
}

TEST_CASE("graph power law weights are monotone in graph order") {
  auto spatial = testsupport::make_fixture_spatial();
  auto w = build_weights({WeightKind::graph_power_law, 0.6}, spatial);
  for (int i = 0; i < spatial.n_areas(); ++i)
    for (int j = 0; j < spatial.n_areas(); ++j)
      for (int k = 0; k < spatial.n_areas(); ++k) {
        if (j == i || k == i) continue;
        if (spatial.order(i, j) < spatial.order(i, k)) CHECK(w(i, j) > w(i, k));
      }
}

TEST_CASE("an isolated area yields a zero row and a warning, not an error") {
  SpatialStructure spatial({"a", "b", "c"}, {},
                           {{false, true, false}, {true, false, false},
                            {false, false, false}});
  auto w = build_weights({WeightKind::graph_power_law, 0.5}, spatial);
  CHECK(w(2, 0) == 0.0);
  CHECK(w(2, 1) == 0.0);
  REQUIRE(w.warnings.size() == 1);
  CHECK(w.warnings[0].find("'c'") != std::string::npos);
  CHECK(w(0, 1) == 1.0);
}

TEST_CASE("theta outside (0,1) is rejected for power-law schemes") {
  auto spatial = testsupport::make_fixture_spatial();
  CHECK_THROWS_AS(build_weights({WeightKind::graph_power_law, 0.0}, spatial),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_weights({WeightKind::graph_power_law, 1.0}, spatial),
                  std::invalid_argument);
}

#include "epicount/panel.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "epicount/csv.hpp"

namespace epicount {

SurveillancePanel::SurveillancePanel(std::vector<std::string> areas,
                                     std::vector<std::vector<long long>> counts,
                                     std::vector<std::vector<long long>> populations,
                                     int periods_per_year)
    : areas_(std::move(areas)),
      counts_(std::move(counts)),
      populations_(std::move(populations)),
      period_(periods_per_year) {
  if (areas_.empty()) throw std::invalid_argument("panel: no areas");
  if (counts_.size() != areas_.size() || populations_.size() != areas_.size())
    throw std::invalid_argument("panel: counts/populations must have one row per area");
  if (period_ < 1) throw std::invalid_argument("panel: periods_per_year must be >= 1");
  n_times_ = static_cast<int>(counts_[0].size());
  if (n_times_ == 0) throw std::invalid_argument("panel: no time points");
  std::set<std::string> seen;
  for (size_t i = 0; i < areas_.size(); ++i) {
    if (!seen.insert(areas_[i]).second)
      throw std::invalid_argument("panel: duplicate area '" + areas_[i] + "'");
    if (static_cast<int>(counts_[i].size()) != n_times_)
      throw std::invalid_argument("panel: ragged counts, area '" + areas_[i] + "' has " +
                                  std::to_string(counts_[i].size()) + " times, expected " +
                                  std::to_string(n_times_));
    for (int t = 0; t < n_times_; ++t)
      if (counts_[i][t] < 0)
        throw std::invalid_argument("panel: negative count at area '" + areas_[i] +
                                    "', time " + std::to_string(t + 1));
    const auto& p = populations_[i];
    if (p.size() != 1 && static_cast<int>(p.size()) != n_times_)
      throw std::invalid_argument("panel: populations for area '" + areas_[i] +
                                  "' must have 1 or T entries");
    for (long long v : p)
      if (v < 1)
        throw std::invalid_argument("panel: population < 1 for area '" + areas_[i] + "'");
  }
}

void SurveillancePanel::attach_births(std::vector<std::vector<long long>> births,
                                      int maternal_lag) {
  if (maternal_lag < 0) throw std::invalid_argument("panel: maternal_lag must be >= 0");
  if (births.size() != areas_.size())
    throw std::invalid_argument("panel: births must have one row per area");
  for (size_t i = 0; i < births.size(); ++i) {
    if (static_cast<int>(births[i].size()) != n_times_)
      throw std::invalid_argument("panel: births for area '" + areas_[i] +
                                  "' must match the counts shape");
    for (int t = 0; t < n_times_; ++t)
      if (births[i][t] < 0)
        throw std::invalid_argument("panel: negative births at area '" + areas_[i] +
                                    "', time " + std::to_string(t + 1));
  }
  births_ = std::move(births);
  maternal_lag_ = maternal_lag;
}

int SurveillancePanel::area_index(const std::string& name) const {
  for (size_t i = 0; i < areas_.size(); ++i)
    if (areas_[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

struct LongTable {
  std::vector<std::string> areas;            // first-appearance order
  std::vector<long long> times;              // sorted unique original labels
  std::vector<std::vector<long long>> grid;  // [area][time], filled where seen
  std::vector<std::vector<bool>> seen;
};

// Reads an (area,time,value) long-format CSV into a rectangular grid,
// diagnosing duplicates and ragged coverage by name.
LongTable read_long_format(const std::string& path, const std::string& value_column) {
  CsvTable csv = read_csv(path);
  int ca = csv.column("area"), ct = csv.column("time"), cv = csv.column(value_column);
  if (ca < 0 || ct < 0 || cv < 0)
    throw std::runtime_error(path + ": expected header area,time," + value_column);

  LongTable out;
  std::map<std::string, int> area_of;
  std::set<long long> time_set;
  struct Row {
    std::string area;
    long long time, value;
  };
  std::vector<Row> rows;
  for (const auto& r : csv.rows) {
    Row row{r[ca], parse_integer(r[ct], "time"), parse_integer(r[cv], value_column)};
    if (area_of.emplace(row.area, static_cast<int>(out.areas.size())).second)
      out.areas.push_back(row.area);
    time_set.insert(row.time);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  out.times.assign(time_set.begin(), time_set.end());
  std::map<long long, int> time_of;
  for (size_t k = 0; k < out.times.size(); ++k) time_of[out.times[k]] = static_cast<int>(k);

  out.grid.assign(out.areas.size(), std::vector<long long>(out.times.size(), 0));
  out.seen.assign(out.areas.size(), std::vector<bool>(out.times.size(), false));
  for (const auto& row : rows) {
    int i = area_of[row.area], t = time_of[row.time];
    if (out.seen[i][t])
      throw std::invalid_argument(path + ": duplicate row for area '" + row.area +
                                  "', time " + std::to_string(row.time));
    if (row.value < 0)
      throw std::invalid_argument(path + ": negative " + value_column + " at area '" +
                                  row.area + "', time " + std::to_string(row.time));
    out.seen[i][t] = true;
    out.grid[i][t] = row.value;
  }
  for (size_t i = 0; i < out.areas.size(); ++i)
    for (size_t t = 0; t < out.times.size(); ++t)
      if (!out.seen[i][t])
        throw std::invalid_argument(path + ": ragged matrix, missing area '" + out.areas[i] +
                                    "', time " + std::to_string(out.times[t]));
  return out;
}

}  // namespace

SurveillancePanel SurveillancePanel::load(const std::string& counts_path,
                                          const std::string& populations_path,
                                          int periods_per_year) {
  LongTable counts = read_long_format(counts_path, "count");

  CsvTable pop_csv = read_csv(populations_path);
  int ca = pop_csv.column("area"), cp = pop_csv.column("population");
  int ct = pop_csv.column("time");
  if (ca < 0 || cp < 0)
    throw std::runtime_error(populations_path + ": expected area,population columns");

  std::vector<std::vector<long long>> populations(counts.areas.size());
  std::map<std::string, int> area_of;
  for (size_t i = 0; i < counts.areas.size(); ++i) area_of[counts.areas[i]] = static_cast<int>(i);

  if (ct < 0) {
    for (const auto& r : pop_csv.rows) {
      auto it = area_of.find(r[ca]);
      if (it == area_of.end())
        throw std::invalid_argument(populations_path + ": unknown area '" + r[ca] + "'");
      if (!populations[it->second].empty())
        throw std::invalid_argument(populations_path + ": duplicate area '" + r[ca] + "'");
      populations[it->second].push_back(parse_integer(r[cp], "population"));
    }
  } else {
    std::map<long long, int> time_of;
    for (size_t k = 0; k < counts.times.size(); ++k)
      time_of[counts.times[k]] = static_cast<int>(k);
    for (auto& p : populations) p.assign(counts.times.size(), 0);
    for (const auto& r : pop_csv.rows) {
      auto it = area_of.find(r[ca]);
      if (it == area_of.end())
        throw std::invalid_argument(populations_path + ": unknown area '" + r[ca] + "'");
      auto jt = time_of.find(parse_integer(r[ct], "time"));
      if (jt == time_of.end())
        throw std::invalid_argument(populations_path + ": unknown time in row for area '" +
                                    r[ca] + "'");
      populations[it->second][jt->second] = parse_integer(r[cp], "population");
    }
  }
  for (size_t i = 0; i < populations.size(); ++i)
    if (populations[i].empty())
      throw std::invalid_argument(populations_path + ": no population for area '" +
                                  counts.areas[i] + "'");

  return SurveillancePanel(counts.areas, counts.grid, populations, periods_per_year);
}

void SurveillancePanel::load_births(const std::string& births_path, int maternal_lag) {
  LongTable births = read_long_format(births_path, "births");
  if (static_cast<int>(births.times.size()) != n_times_ || births.areas.size() != areas_.size())
    throw std::invalid_argument(births_path + ": births must cover the same areas and times "
                                              "as the counts");
  std::vector<std::vector<long long>> aligned(areas_.size());
  for (size_t i = 0; i < areas_.size(); ++i) {
    auto it = std::find(births.areas.begin(), births.areas.end(), areas_[i]);
    if (it == births.areas.end())
      throw std::invalid_argument(births_path + ": missing area '" + areas_[i] + "'");
    aligned[i] = births.grid[it - births.areas.begin()];
  }
  attach_births(std::move(aligned), maternal_lag);
}

void SurveillancePanel::write_counts_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "area,time,count\n";
  for (int i = 0; i < n_areas(); ++i)
    for (int t = 1; t <= n_times_; ++t)
      out << areas_[i] << ',' << t << ',' << counts_[i][t - 1] << '\n';
}

void SurveillancePanel::write_populations_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  bool per_time = false;
  for (const auto& p : populations_)
    if (p.size() > 1) per_time = true;
  if (per_time) {
    out << "area,time,population\n";
    for (int i = 0; i < n_areas(); ++i)
      for (int t = 1; t <= n_times_; ++t)
        out << areas_[i] << ',' << t << ',' << population(i, t) << '\n';
  } else {
    out << "area,population\n";
    for (int i = 0; i < n_areas(); ++i) out << areas_[i] << ',' << populations_[i][0] << '\n';
  }
}

void SurveillancePanel::write_births_csv(const std::string& path) const {
  if (!has_births()) throw std::runtime_error("panel has no births to write");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "area,time,births\n";
  for (int i = 0; i < n_areas(); ++i)
    for (int t = 1; t <= n_times_; ++t)
      out << areas_[i] << ',' << t << ',' << births_[i][t - 1] << '\n';
}

}  // namespace epicount

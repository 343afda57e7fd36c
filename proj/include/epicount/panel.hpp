#pragma once

#include <string>
#include <vector>

namespace epicount {

/// Areal surveillance counts y[i][t] with populations and optional births.
/// Time is a bare 1..T index with a declared number of periods per year;
/// all types are immutable after construction apart from attach_births.
class SurveillancePanel {
 public:
  /// counts[i] must have the same length T for every area; populations[i]
  /// has either one entry (constant per area) or T entries (per time).
  SurveillancePanel(std::vector<std::string> areas,
                    std::vector<std::vector<long long>> counts,
                    std::vector<std::vector<long long>> populations,
                    int periods_per_year = 52);

  int n_areas() const { return static_cast<int>(areas_.size()); }
  int n_times() const { return n_times_; }
  int periods_per_year() const { return period_; }

  /// t is the 1..T time index.
  long long count(int area, int t) const { return counts_[area][t - 1]; }
  long long population(int area, int t) const {
    const auto& p = populations_[area];
    return p.size() == 1 ? p[0] : p[t - 1];
  }

  bool has_births() const { return !births_.empty(); }
  long long births(int area, int t) const { return births_[area][t - 1]; }
  int maternal_lag() const { return maternal_lag_; }

  /// births must have the same shape as counts; lag d >= 0.
  void attach_births(std::vector<std::vector<long long>> births, int maternal_lag);

  const std::vector<std::string>& areas() const { return areas_; }
  int area_index(const std::string& name) const;

  const std::vector<std::vector<long long>>& counts() const { return counts_; }
  const std::vector<std::vector<long long>>& populations() const { return populations_; }
  const std::vector<std::vector<long long>>& births_matrix() const { return births_; }

  bool operator==(const SurveillancePanel&) const = default;

  /// Loads and validates a panel from a counts CSV (area,time,count) and a
  /// populations CSV (area,population or area,time,population). Time labels
  /// are re-based to 1..T in ascending order.
  static SurveillancePanel load(const std::string& counts_path,
                                const std::string& populations_path,
                                int periods_per_year = 52);

  /// Births CSV has the counts shape with a `births` column.
  void load_births(const std::string& births_path, int maternal_lag);

  void write_counts_csv(const std::string& path) const;
  void write_populations_csv(const std::string& path) const;
  void write_births_csv(const std::string& path) const;

 private:
  std::vector<std::string> areas_;
  std::vector<std::vector<long long>> counts_;       // [i][t-1]
  std::vector<std::vector<long long>> populations_;  // [i]: size 1 or T
  std::vector<std::vector<long long>> births_;       // empty, or counts shape
  int n_times_ = 0;
  int maternal_lag_ = 0;
  int period_ = 52;
};

}  // namespace epicount

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "invdim/bounds.hpp"
#include "invdim/boxdim.hpp"
#include "invdim/systems.hpp"

namespace invdim {

/// Scale schedule parameters; delta_max defaults to a quarter of the sampled
/// set's diameter when unset.
struct ScheduleConfig {
  std::optional<double> delta_max;
  double ratio = 0.5;
  int count = 8;
};

struct RunConfig {
  std::string system;
  std::map<std::string, double> params;
  std::int64_t budget = 100000;
  std::uint64_t seed = 1;
  int m_max = 32;
  ScheduleConfig schedule;
  bool deterministic = false;  // omit timestamps so identical configs give identical bytes
};

/// Full comparison of the empirical dimension estimates against every
/// applicable theorem bound, with per-bound dominance verdicts.
struct DimensionReport {
  nlohmann::json doc;
  double empirical_box = 0;
  double empirical_lemma21 = 0;
  bool all_dominate = true;  // every applicable bound >= empirical - tolerance
};

/// Fit tolerance subtracted from the empirical estimate in dominance verdicts.
inline constexpr double kDominanceTolerance = 0.05;

ScaleSchedule resolve_schedule(const ScheduleConfig& cfg, const PointCloud& cloud);

DimensionReport run_report(const RunConfig& cfg);

/// One CSV row: parameter, empirical_box, empirical_lemma21, thm11, thm12,
/// thm25, rmk24, verdict. Empty cells for inapplicable bounds.
std::string report_csv_header();
std::string report_csv_row(const DimensionReport& report, const std::string& parameter_value);

/// Runs one report per value of the swept parameter; per-row failures are
/// recorded on the row and the sweep continues. Returns the number of failed rows.
int run_sweep(const RunConfig& base, const std::string& param_name,
              const std::vector<double>& values, std::ostream& csv_out,
              std::ostream& diagnostics);

std::string list_systems_table();
nlohmann::json list_systems_json();

nlohmann::json fit_to_json(const FitResult& fit, const std::string& value_key);
nlohmann::json bound_to_json(const BoundResult& bound);
nlohmann::json rates_to_json(const GrowthRates& rates);
nlohmann::json system_to_json(const SystemInfo& info);

}  // namespace invdim

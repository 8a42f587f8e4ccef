#include "invdim/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "invdim/errors.hpp"

namespace invdim {

namespace {

using nlohmann::json;

std::string num_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ScaleSchedule resolve_schedule(const ScheduleConfig& cfg, const PointCloud& cloud) {
  double delta_max;
  if (cfg.delta_max) {
    delta_max = *cfg.delta_max;
  } else {
    double diam = cloud_diameter(cloud);
    if (!(diam > 1e-6)) diam = 1.0;  // degenerate clouds (single fixed point)
    delta_max = diam / 4.0;
  }
  return ScaleSchedule::geometric(delta_max, cfg.ratio, cfg.count);
}

json fit_to_json(const FitResult& fit, const std::string& value_key) {
  json scales = json::array();
  for (const auto& sp : fit.scales) {
    json s;
    s["delta"] = sp.delta;
    s[value_key] = sp.value;
    s["used"] = sp.used;
    scales.push_back(s);
  }
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"residual_rms", fit.residual_rms},
              {"dimension", fit.dimension},
              {"scales", scales},
              {"pair_slopes", fit.pair_slopes}};
}

json bound_to_json(const BoundResult& bound) {
  json digest;
  for (const auto& [k, v] : bound.inputs_digest) digest[k] = v;
  json j{{"theorem", bound_kind_name(bound.kind)},
         {"applicable", bound.applicable},
         {"notes", bound.notes},
         {"inputs_digest", digest}};
  if (bound.applicable)
    j["value"] = *bound.value;
  else
    j["reason"] = bound.reason;
  return j;
}

json rates_to_json(const GrowthRates& rates) {
  return json{{"direction", direction_name(rates.direction)},
              {"m_values", rates.m_values},
              {"c_over_m", rates.c_over_m},
              {"a_over_m", rates.a_over_m},
              {"norm_product_over_m", rates.norm_product_over_m},
              {"survivors", rates.survivors},
              {"sample_points", rates.sample_points},
              {"dropped_points", rates.dropped_points},
              {"min_step_abs_det", rates.min_step_abs_det},
              {"b_hat", rates.b_hat},
              {"s_hat", rates.s_hat}};
}

json system_to_json(const SystemInfo& info) {
  json params;
  for (const auto& [k, v] : info.params) params[k] = v;
  json j{{"name", info.name},
         {"ambient", {{"kind", info.ambient.kind_name()}, {"dim", info.ambient.dim}}},
         {"params", params},
         {"invariance", invariance_name(info.invariance)},
         {"invertible", info.invertible}};
  if (info.degree) j["degree"] = *info.degree;
  if (info.reference_dimension) {
    j["reference_dimension"] = *info.reference_dimension;
    j["reference_note"] = info.reference_note;
  }
  return j;
}

DimensionReport run_report(const RunConfig& cfg) {
  const SystemPtr sys = make_system(cfg.system, cfg.params);
  const int n = sys->info().ambient.dim;

  const PointCloud cloud = sys->sample_invariant_set(cfg.budget, cfg.seed);
  const ScaleSchedule schedule = resolve_schedule(cfg.schedule, cloud);

  DimensionReport rep;
  json& doc = rep.doc;
  doc["system"] = system_to_json(sys->info());
  doc["inputs"] = json{{"budget", cfg.budget},
                       {"seed", cfg.seed},
                       {"m_max", cfg.m_max},
                       {"schedule", {{"deltas", schedule.deltas}}},
                       {"sampler", {{"method", cloud.meta.method},
                                    {"transient", cloud.meta.transient},
                                    {"points", cloud.size()}}}};
  if (!cfg.deterministic) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["generated_at_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  }

  json failures = json::array();

  // empirical estimates: direct counting and the neighborhood-volume route
  std::optional<FitResult> box_fit, vol_fit;
  try {
    box_fit = estimate_box_dimension(cloud, schedule);
    doc["empirical"]["box"] = fit_to_json(*box_fit, "count");
    rep.empirical_box = box_fit->dimension;
  } catch (const std::exception& e) {
    failures.push_back(std::string("boxdim: ") + e.what());
  }
  try {
    vol_fit = lemma21_estimate(cloud, schedule);
    doc["empirical"]["lemma21"] = fit_to_json(*vol_fit, "volume");
    rep.empirical_lemma21 = vol_fit->dimension;
  } catch (const std::exception& e) {
    failures.push_back(std::string("boxdim: ") + e.what());
  }

  // theorem bounds, each guarded so partial reports still get written
  std::vector<BoundResult> bounds;
  try {
    bounds.push_back(thm11_min_d(*sys, cloud));
  } catch (const std::exception& e) {
    failures.push_back(std::string("bounds: thm11: ") + e.what());
  }

  std::optional<GrowthRates> fwd, inv;
  try {
    fwd = growth_rates(*sys, cloud, cfg.m_max, Direction::Forward);
    doc["growth_rates"]["forward"] = rates_to_json(*fwd);
  } catch (const std::exception& e) {
    failures.push_back(std::string("bounds: forward rates: ") + e.what());
  }
  if (sys->info().invertible) {
    try {
      inv = growth_rates(*sys, cloud, cfg.m_max, Direction::Inverse);
      doc["growth_rates"]["inverse"] = rates_to_json(*inv);
    } catch (const std::exception& e) {
      failures.push_back(std::string("bounds: inverse rates: ") + e.what());
    }
  }

  if (sys->info().degree && fwd) {
    try {
      bounds.push_back(thm12_bound(*fwd, *sys->info().degree, n));
    } catch (const std::exception& e) {
      failures.push_back(std::string("bounds: thm12: ") + e.what());
    }
  } else {
    BoundResult skipped;
    skipped.kind = BoundKind::Thm12;
    skipped.reason = sys->info().degree ? "forward growth rates unavailable"
                                        : "no degree metadata (open ambient)";
    bounds.push_back(skipped);
  }

  if (sys->info().invertible && inv) {
    try {
      bounds.push_back(thm25_bound(*inv, n));
    } catch (const std::exception& e) {
      failures.push_back(std::string("bounds: thm25: ") + e.what());
    }
  } else {
    BoundResult skipped;
    skipped.kind = BoundKind::Thm25;
    skipped.reason = sys->info().invertible ? "inverse growth rates unavailable"
                                            : "map is not invertible on its image";
    bounds.push_back(skipped);
  }

  if (sys->info().invertible && fwd) {
    try {
      bounds.push_back(remark24_bound(*fwd, n));
    } catch (const std::exception& e) {
      failures.push_back(std::string("bounds: rmk24: ") + e.what());
    }
  } else {
    BoundResult skipped;
    skipped.kind = BoundKind::Rmk24;
    skipped.reason = sys->info().invertible
                         ? "forward growth rates unavailable"
                         : "requires a diffeomorphism onto its image (map not invertible)";
    bounds.push_back(skipped);
  }

  json bounds_json = json::array();
  json verdicts = json::array();
  for (const auto& b : bounds) {
    bounds_json.push_back(bound_to_json(b));
    if (b.applicable && box_fit) {
      const bool dominates = *b.value >= rep.empirical_box - kDominanceTolerance;
      rep.all_dominate = rep.all_dominate && dominates;
      verdicts.push_back(json{{"theorem", bound_kind_name(b.kind)},
                              {"value", *b.value},
                              {"dominates_empirical", dominates}});
    }
  }
  doc["bounds"] = bounds_json;
  doc["verdicts"] = verdicts;
  doc["failures"] = failures;
  if (!failures.empty() && !box_fit) rep.all_dominate = false;
  doc["all_applicable_bounds_dominate"] = rep.all_dominate;
  doc["notes"] = json::array(
      {"bound extrema are evaluated over the sampled points, a surrogate for the invariant set",
       "the Hausdorff dimension never exceeds the upper box dimension, so every bound here "
       "applies to it as well"});
  return rep;
}

std::string report_csv_header() {
  return "parameter,empirical_box,empirical_lemma21,thm11,thm12,thm25,rmk24,verdict";
}

std::string report_csv_row(const DimensionReport& report, const std::string& parameter_value) {
  std::map<std::string, std::string> cells;
  for (const auto& b : report.doc["bounds"])
    if (b["applicable"].get<bool>())
      cells[b["theorem"].get<std::string>()] = num_cell(b["value"].get<double>());
  std::ostringstream os;
  os << parameter_value << "," << num_cell(report.empirical_box) << ","
     << num_cell(report.empirical_lemma21);
  for (const char* k : {"thm11", "thm12", "thm25", "rmk24"})
    os << "," << (cells.count(k) ? cells[k] : "");
  os << "," << (report.all_dominate ? "true" : "false");
  return os.str();
}

int run_sweep(const RunConfig& base, const std::string& param_name,
              const std::vector<double>& values, std::ostream& csv_out,
              std::ostream& diagnostics) {
  if (values.empty()) throw InvalidInput("cli: sweep needs a non-empty value list");
  csv_out << report_csv_header() << "\n";
  int failures = 0;
  for (double v : values) {
    RunConfig cfg = base;
    cfg.params[param_name] = v;
    try {
      const DimensionReport rep = run_report(cfg);
      csv_out << report_csv_row(rep, num_cell(v)) << "\n";
    } catch (const std::exception& e) {
      ++failures;
      csv_out << num_cell(v) << ",,,,,,,error\n";
      diagnostics << "sweep: " << param_name << "=" << num_cell(v) << " failed: " << e.what()
                  << "\n";
    }
  }
  return failures;
}

std::string list_systems_table() {
  std::ostringstream os;
  os << std::left << std::setw(22) << "name" << std::setw(16) << "ambient" << std::setw(30)
     << "parameters" << std::setw(12) << "invariance" << std::setw(8) << "degree" << std::setw(10)
     << "inverse" << "ref_dim" << "\n";
  for (const auto& info : builtin_catalog()) {
    std::ostringstream params;
    for (size_t i = 0; i < info.params.size(); ++i)
      params << (i ? " " : "") << info.params[i].first << "=" << info.params[i].second;
    std::ostringstream amb;
    amb << info.ambient.kind_name() << "^" << info.ambient.dim;
    os << std::left << std::setw(22) << info.name << std::setw(16) << amb.str() << std::setw(30)
       << params.str() << std::setw(12) << invariance_name(info.invariance) << std::setw(8)
       << (info.degree ? std::to_string(*info.degree) : "-") << std::setw(10)
       << (info.invertible ? "yes" : "no")
       << (info.reference_dimension ? num_cell(*info.reference_dimension) : "-") << "\n";
  }
  return os.str();
}

nlohmann::json list_systems_json() {
  json arr = json::array();
  for (const auto& info : builtin_catalog()) arr.push_back(system_to_json(info));
  return arr;
}

}  // namespace invdim

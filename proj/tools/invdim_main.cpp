#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invdim/cloud_io.hpp"
#include "invdim/errors.hpp"
#include "invdim/report.hpp"

namespace {

using invdim::RunConfig;

struct CommonArgs {
  RunConfig cfg;
  std::vector<std::string> params;
  std::string out_path;
  std::string format = "json";
};

void add_run_options(CLI::App* cmd, CommonArgs& args, bool with_format_json_csv) {
  cmd->add_option("--system", args.cfg.system, "built-in system name (see list-systems)")
      ->required();
  cmd->add_option("--param", args.params, "system parameter assignment k=v (repeatable)");
  cmd->add_option("--budget", args.cfg.budget, "number of sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.cfg.seed, "sampler seed");
  cmd->add_option("--m-max", args.cfg.m_max, "largest iterate count for growth rates")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
         "--delta-max", [&args](const double& v) { args.cfg.schedule.delta_max = v; },
         "largest scale (default: sampled diameter / 4)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ratio", args.cfg.schedule.ratio, "scale ratio between consecutive scales");
  cmd->add_option("--scales", args.cfg.schedule.count, "number of scales")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", args.out_path, "output file path (default: stdout)");
  if (with_format_json_csv)
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--deterministic", args.cfg.deterministic,
                "omit timestamps so identical configs produce identical bytes");
}

void apply_params(CommonArgs& args) {
  for (const auto& kv : args.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw invdim::InvalidInput("cli: --param expects k=v, got '" + kv + "'");
    args.cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invdim::InvalidInput("cli: cannot open output file " + path);
  out << text;
}

std::string report_summary(const invdim::DimensionReport& rep) {
  std::ostringstream os;
  const auto& doc = rep.doc;
  os << "system: " << doc["system"]["name"].get<std::string>() << "\n";
  os << "empirical box dimension:      " << rep.empirical_box << "\n";
  os << "empirical (volume route):     " << rep.empirical_lemma21 << "\n";
  for (const auto& b : doc["bounds"]) {
    os << "bound " << b["theorem"].get<std::string>() << ": ";
    if (b["applicable"].get<bool>())
      os << b["value"].get<double>();
    else
      os << "inapplicable (" << b["reason"].get<std::string>() << ")";
    os << "\n";
  }
  os << "all applicable bounds dominate: " << (rep.all_dominate ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invdim: box-dimension estimates and theorem bounds for invariant sets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file; command-line flags win over file values");

  // list-systems ------------------------------------------------------------
  auto* list_cmd = app.add_subcommand("list-systems", "print the built-in system registry");
  std::string list_format = "table";
  list_cmd->add_option("--format", list_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));

  // sample ------------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "sample the invariant set to a point cloud");
  CommonArgs sample_args;
  add_run_options(sample_cmd, sample_args, false);
  std::string sample_format = "csv";
  sample_cmd->add_option("--format", sample_format, "cloud format")
      ->check(CLI::IsMember({"csv", "binary"}));

  // boxdim ------------------------------------------------------------------
  auto* boxdim_cmd = app.add_subcommand("boxdim", "empirical dimension estimates only");
  CommonArgs boxdim_args;
  add_run_options(boxdim_cmd, boxdim_args, true);

  // bounds ------------------------------------------------------------------
  auto* bounds_cmd = app.add_subcommand("bounds", "theorem bounds only");
  CommonArgs bounds_args;
  add_run_options(bounds_cmd, bounds_args, true);

  // report ------------------------------------------------------------------
  auto* report_cmd =
      app.add_subcommand("report", "full report: empirical estimates, bounds, verdicts");
  CommonArgs report_args;
  add_run_options(report_cmd, report_args, true);

  // sweep ---------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "report rows over a parameter range (CSV)");
  CommonArgs sweep_args;
  add_run_options(sweep_cmd, sweep_args, false);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--sweep-param", sweep_param, "name of the swept parameter")->required();
  sweep_cmd->add_option("--values", sweep_values, "swept parameter values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list_cmd) {
      write_text("", list_format == "json" ? invdim::list_systems_json().dump(2) + "\n"
                                           : invdim::list_systems_table());
      return 0;
    }

    if (*sample_cmd) {
      apply_params(sample_args);
      auto sys = invdim::make_system(sample_args.cfg.system, sample_args.cfg.params);
      auto cloud = sys->sample_invariant_set(sample_args.cfg.budget, sample_args.cfg.seed);
      if (sample_format == "binary") {
        if (sample_args.out_path.empty())
          throw invdim::InvalidInput("cli: binary clouds need --out");
        std::ofstream out(sample_args.out_path, std::ios::binary);
        invdim::write_cloud_binary(cloud, out);
      } else if (sample_args.out_path.empty()) {
        invdim::write_cloud_csv(cloud, std::cout);
      } else {
        std::ofstream out(sample_args.out_path, std::ios::binary);
        invdim::write_cloud_csv(cloud, out);
      }
      return 0;
    }

    if (*boxdim_cmd || *bounds_cmd || *report_cmd) {
      CommonArgs& args = *boxdim_cmd ? boxdim_args : (*bounds_cmd ? bounds_args : report_args);
      apply_params(args);
      const invdim::DimensionReport rep = invdim::run_report(args.cfg);

      nlohmann::json out_doc;
      if (*boxdim_cmd) {
        out_doc["system"] = rep.doc["system"];
        out_doc["empirical"] = rep.doc["empirical"];
      } else if (*bounds_cmd) {
        out_doc["system"] = rep.doc["system"];
        out_doc["bounds"] = rep.doc["bounds"];
        if (rep.doc.contains("growth_rates")) out_doc["growth_rates"] = rep.doc["growth_rates"];
      } else {
        out_doc = rep.doc;
      }

      std::string payload;
      if (args.format == "csv")
        payload = invdim::report_csv_header() + "\n" + invdim::report_csv_row(rep, "") + "\n";
      else
        payload = out_doc.dump(2) + "\n";
      write_text(args.out_path, payload);
      if (*report_cmd && !args.out_path.empty()) std::cout << report_summary(rep);
      return *report_cmd ? (rep.all_dominate ? 0 : 2) : 0;
    }

    if (*sweep_cmd) {
      apply_params(sweep_args);
      int failed;
      if (sweep_args.out_path.empty()) {
        failed = invdim::run_sweep(sweep_args.cfg, sweep_param, sweep_values, std::cout,
                                   std::cerr);
      } else {
        std::ofstream out(sweep_args.out_path, std::ios::binary);
        if (!out) throw invdim::InvalidInput("cli: cannot open output file " + sweep_args.out_path);
        failed = invdim::run_sweep(sweep_args.cfg, sweep_param, sweep_values, out, std::cerr);
      }
      return failed == 0 ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

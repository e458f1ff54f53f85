#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdnsim/error.hpp"
#include "pdnsim/run.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"TSV power-delivery network IR-drop and aging simulator"};
  app.get_formatter()->column_width(26);

  std::string command;
  app.add_option("command", command,
                 "one of: layout, netlist, rw, irmap, napsaa, headroom, age, "
                 "lifetime, perf, compare")
      ->required();

  std::string config_path;
  std::string design;
  std::string out_dir;
  std::vector<std::string> workload_files;
  int n = 0;
  double margin_mv = 0.0;
  double horizon_years = 0.0;

  auto* config_opt = app.add_option("--config", config_path, "configuration file");
  auto* design_opt =
      app.add_option("--design", design, "clustered, distributed, or both")
          ->check(CLI::IsMember({"clustered", "distributed", "both"}));
  auto* n_opt = app.add_option("--n", n, "SAA count for irmap");
  auto* workload_opt = app.add_option(
      "--workload", workload_files, "workload profile file (repeatable, replaces the config list)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* margin_opt = app.add_option("--margin-mv", margin_mv, "IR-drop margin in mV");
  auto* horizon_opt =
      app.add_option("--horizon-years", horizon_years, "aging horizon in years");

  CLI11_PARSE(app, argc, argv);

  try {
    pdnsim::RunConfig cfg = config_opt->count()
                                ? pdnsim::parse_config_file(config_path)
                                : pdnsim::default_run_config();
    if (design_opt->count()) {
      if (design == "clustered") {
        cfg.scope = pdnsim::DesignScope::clustered_only;
      } else if (design == "distributed") {
        cfg.scope = pdnsim::DesignScope::distributed_only;
      } else {
        cfg.scope = pdnsim::DesignScope::both;
      }
    }
    if (out_opt->count()) cfg.out_dir = out_dir;
    if (margin_opt->count()) {
      if (!(margin_mv > 0.0)) pdnsim::fail("invalid-params", "--margin-mv must be > 0");
      cfg.margin_mv = margin_mv;
      cfg.pdn_clustered.ir_margin_mv = margin_mv;
      cfg.pdn_distributed.ir_margin_mv = margin_mv;
    }
    if (horizon_opt->count()) {
      if (!(horizon_years > 0.0)) {
        pdnsim::fail("invalid-params", "--horizon-years must be > 0");
      }
      cfg.horizon_years = horizon_years;
    }
    if (workload_opt->count()) {
      cfg.workload_paths.clear();
      cfg.workloads.clear();
      for (const std::string& path : workload_files) {
        if (!fs::exists(path)) pdnsim::fail("missing-workload-file", path);
        cfg.workload_paths.push_back(fs::absolute(path).lexically_normal().string());
        cfg.workloads.push_back(pdnsim::parse_workload_file(path));
      }
    }
    pdnsim::CommandOptions opts;
    if (n_opt->count()) opts.n = n;
    return pdnsim::run_command(command, cfg, opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <string>
#include <vector>

#include "pdnsim/aging.hpp"
#include "pdnsim/em.hpp"
#include "pdnsim/geometry.hpp"
#include "pdnsim/perf.hpp"

namespace pdnsim {

enum class DesignScope { clustered_only, distributed_only, both };

struct RunConfig {
  DesignScope scope = DesignScope::both;
  StackConfig stack;
  PdnParams pdn_clustered;
  PdnParams pdn_distributed;
  EmParams em;
  VoidResistanceModel void_clustered;
  VoidResistanceModel void_distributed;
  // Paths echoed back by render_config; empty for the built-in tables.
  std::string void_table_path_clustered;
  std::string void_table_path_distributed;
  DramTiming timing;
  std::vector<std::string> workload_paths;
  std::vector<WorkloadProfile> workloads;
  std::string out_dir = "out";
  double margin_mv = 75.0;
  double horizon_years = 60.0;
  long seed = 0;  // reserved; the pipeline is deterministic

  const PdnParams& pdn(Design d) const {
    return d == Design::clustered ? pdn_clustered : pdn_distributed;
  }
  const VoidResistanceModel& void_model(Design d) const {
    return d == Design::clustered ? void_clustered : void_distributed;
  }
  std::vector<Design> designs() const;
};

// Calibrated per-design defaults used when a key is not overridden.
PdnParams canonical_pdn_params(Design d);
VoidResistanceModel canonical_void_model(Design d);
double canonical_em_dt_s();

RunConfig default_run_config();

// Parses line-oriented "key = value" text with # comments. Relative workload
// and table paths resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig parse_config_file(const std::string& path);

WorkloadProfile parse_workload_text(const std::string& text);
WorkloadProfile parse_workload_file(const std::string& path);

// Full key = value dump; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& c);

}  // namespace pdnsim

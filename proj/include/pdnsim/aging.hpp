#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdnsim/em.hpp"
#include "pdnsim/irdrop.hpp"

namespace pdnsim {

struct WorkloadProfile {
  std::string name;
  // Fraction of wall time the memory is under activation stress.
  double active_fraction = 1.0;
  // Parallel-SAA level the workload drives when available (1..32).
  int demanded_parallelism = 32;
  // Active time of one application run, s.
  double run_active_time_s = 3600.0;
  double request_rate = 1.0e7;       // accesses/s
  double read_write_energy_j = 6e-9; // J per access
  double static_power_w = 0.1;
  double activation_energy_j = 1e-8; // J per SAA
};

void validate_workload(const WorkloadProfile& wl);

struct AgingEvent {
  double t_s = 0.0;
  int napsaa = 0;
  double max_droop_mv = 0.0;
  double tsv_resistance_ohm = 0.0;
  double void_radius_m = 0.0;
};

struct AgingTimeline {
  Design design = Design::clustered;
  std::string workload;
  std::vector<AgingEvent> events;
  // Time at which the level fell below 1; empty when the horizon was reached
  // first.
  std::optional<double> lifetime_s;
};

inline constexpr double kSecondsPerYear = 3.1536e7;

// Per-level max tolerable uniform TSV extra resistance; unachievable levels
// are omitted.
std::map<int, double> headroom_schedule(DroopEngine& engine, double margin_mv,
                                        const std::vector<int>& levels = {32, 16, 8, 4, 2, 1});
std::map<int, double> headroom_schedule(const PdnLayout& layout,
                                        const ResistorNetwork& network, double margin_mv,
                                        const std::vector<int>& levels = {32, 16, 8, 4, 2, 1});

AgingTimeline simulate_aging(DroopEngine& engine, const EmParams& em,
                             const WorkloadProfile& wl, double margin_mv,
                             double horizon_s,
                             const VoidResistanceModel& model = {});
AgingTimeline simulate_aging(const PdnLayout& layout, const ResistorNetwork& network,
                             const EmParams& em, const WorkloadProfile& wl,
                             double margin_mv, double horizon_s,
                             const VoidResistanceModel& model = {});

long runs_until_failure(const WorkloadProfile& wl, double time_to_max_resistance_s);

std::optional<double> lifetime_years(const AgingTimeline& t);

int timeline_transitions(const AgingTimeline& t);

// CSV: t_s,t_years,napsaa,max_droop_mv,tsv_resistance_ohm,void_radius_m
std::string timeline_csv(const AgingTimeline& t);

}  // namespace pdnsim

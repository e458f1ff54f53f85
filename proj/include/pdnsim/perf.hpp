#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdnsim/aging.hpp"

namespace pdnsim {

struct DramTiming {
  double t_rc_ns = 48.0;
  double t_rcd_ns = 13.0;
  double t_cl_ns = 13.0;
};

struct PerfEstimate {
  double throughput = 0.0;    // accesses/s
  double avg_latency_s = 0.0;
  double power_w = 0.0;
  double edp_js = 0.0;        // +inf at zero throughput
};

// Saturation-plus-queueing model: activation capacity napsaa/t_rc caps the
// served rate; the waiting term is M/D/1-style with utilization capped at
// 0.999.
PerfEstimate estimate_performance(const WorkloadProfile& wl, int napsaa,
                                  const DramTiming& timing);

// (t_years, edp) per timeline event; +inf once the level is 0.
std::vector<std::pair<double, double>> edp_over_lifetime(const AgingTimeline& timeline,
                                                         const WorkloadProfile& wl,
                                                         const DramTiming& timing);

std::vector<std::pair<double, double>> normalize_edp(
    const std::vector<std::pair<double, double>>& series, double baseline_edp);

// CSV: t_years,edp_js,edp_normalized
std::string edp_csv(const std::vector<std::pair<double, double>>& series,
                    double baseline_edp);

}  // namespace pdnsim

#include "pdnsim/perf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

PerfEstimate estimate_performance(const WorkloadProfile& wl, int napsaa,
                                  const DramTiming& timing) {
  validate_workload(wl);
  if (napsaa < 1) fail("zero-napsaa", "performance is undefined without activations");
  if (!(timing.t_rc_ns > 0.0) || !(timing.t_rcd_ns > 0.0) || !(timing.t_cl_ns > 0.0)) {
    fail("invalid-params", "timing values must be > 0");
  }
  PerfEstimate out;
  double capacity = napsaa / (timing.t_rc_ns * 1e-9);
  out.throughput = std::min(wl.request_rate, capacity);
  double rho = std::min(0.999, wl.request_rate / capacity);
  out.avg_latency_s = (timing.t_rcd_ns + timing.t_cl_ns) * 1e-9 +
                      rho / (2.0 * capacity * (1.0 - rho));
  out.power_w = wl.static_power_w +
                (wl.activation_energy_j + wl.read_write_energy_j) * out.throughput;
  out.edp_js = out.throughput > 0.0
                   ? (out.power_w / out.throughput) * out.avg_latency_s
                   : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<std::pair<double, double>> edp_over_lifetime(const AgingTimeline& timeline,
                                                         const WorkloadProfile& wl,
                                                         const DramTiming& timing) {
  std::vector<std::pair<double, double>> out;
  out.reserve(timeline.events.size());
  for (const AgingEvent& ev : timeline.events) {
    double t_years = ev.t_s / kSecondsPerYear;
    if (ev.napsaa < 1) {
      out.emplace_back(t_years, std::numeric_limits<double>::infinity());
      continue;
    }
    out.emplace_back(t_years, estimate_performance(wl, ev.napsaa, timing).edp_js);
  }
  return out;
}

std::vector<std::pair<double, double>> normalize_edp(
    const std::vector<std::pair<double, double>>& series, double baseline_edp) {
  if (!(baseline_edp > 0.0)) {
    fail("non-positive-baseline", "EDP baseline must be > 0");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(series.size());
  for (const auto& [t, edp] : series) out.emplace_back(t, edp / baseline_edp);
  return out;
}

std::string edp_csv(const std::vector<std::pair<double, double>>& series,
                    double baseline_edp) {
  auto normalized = normalize_edp(series, baseline_edp);
  std::string out = "t_years,edp_js,edp_normalized\n";
  for (size_t i = 0; i < series.size(); ++i) {
    out += textio::fmt("%.5e,%.5e,%.5e\n", series[i].first, series[i].second,
                       normalized[i].second);
  }
  return out;
}

}  // namespace pdnsim

#include "pdnsim/aging.hpp"

#include <algorithm>
#include <cmath>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

void validate_workload(const WorkloadProfile& w) {
  if (w.name.empty()) fail("invalid-params", "workload name must not be empty");
  if (!(w.active_fraction >= 0.0 && w.active_fraction <= 1.0)) {
    fail("invalid-params", "active_fraction must be in [0, 1]");
  }
  if (w.demanded_parallelism < 1 || w.demanded_parallelism > 32) {
    fail("invalid-params", "demanded_parallelism must be in 1..32");
  }
  if (!(w.run_active_time_s > 0.0)) {
    fail("invalid-params", "run_active_time_s must be > 0");
  }
  if (!(w.request_rate >= 0.0)) fail("invalid-params", "request_rate must be >= 0");
  if (!(w.read_write_energy_j >= 0.0)) {
    fail("invalid-params", "read_write_energy_j must be >= 0");
  }
  if (!(w.static_power_w >= 0.0)) fail("invalid-params", "static_power_w must be >= 0");
  if (!(w.activation_energy_j >= 0.0)) {
    fail("invalid-params", "activation_energy_j must be >= 0");
  }
}

std::map<int, double> headroom_schedule(DroopEngine& engine, double margin_mv,
                                        const std::vector<int>& levels) {
  std::map<int, double> out;
  PlacementPolicy policy = default_policy(engine.layout().design);
  int n_sa = static_cast<int>(engine.network().load_points.size());
  for (int level : levels) {
    if (level < 1 || level > n_sa) continue;
    LoadSet pl = engine.place(level, policy);
    if (engine.max_droop_mv(pl, 0.0) > margin_mv) continue;
    out[level] = engine.headroom(level, margin_mv, policy);
  }
  return out;
}

std::map<int, double> headroom_schedule(const PdnLayout& layout,
                                        const ResistorNetwork& network,
                                        double margin_mv,
                                        const std::vector<int>& levels) {
  DroopEngine engine(layout, network);
  return headroom_schedule(engine, margin_mv, levels);
}

namespace {

struct Level {
  int n = 0;
  double max_extra_ohm = 0.0;
  LoadSet placement;
};

// Resistance-keyed derating ladder, widest level first.
std::vector<Level> build_ladder(DroopEngine& engine, double margin_mv) {
  std::map<int, double> sched = headroom_schedule(engine, margin_mv);
  PlacementPolicy policy = default_policy(engine.layout().design);
  std::vector<Level> ladder;
  for (auto it = sched.rbegin(); it != sched.rend(); ++it) {
    Level lv;
    lv.n = it->first;
    lv.max_extra_ohm = it->second;
    lv.placement = engine.place(lv.n, policy);
    ladder.push_back(lv);
  }
  return ladder;
}

int ladder_index_for(const std::vector<Level>& ladder, double extra_ohm) {
  for (size_t i = 0; i < ladder.size(); ++i) {
    if (extra_ohm <= ladder[i].max_extra_ohm) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

AgingTimeline simulate_aging(DroopEngine& engine, const EmParams& em,
                             const WorkloadProfile& workload, double margin_mv,
                             double horizon_s, const VoidResistanceModel& model) {
  validate_workload(workload);
  if (!(margin_mv > 0.0)) fail("invalid-params", "margin must be > 0");
  if (!(horizon_s > 0.0)) fail("invalid-params", "horizon must be > 0");

  AgingTimeline tl;
  tl.design = engine.layout().design;
  tl.workload = workload.name;

  std::vector<Level> ladder = build_ladder(engine, margin_mv);
  if (ladder.empty()) {
    fail("unachievable-level", "no activation level satisfies the margin at age zero");
  }
  const double r0 = engine.network().chain_base_ohm + engine.network().chain_extra_ohm;

  int li = 0;
  VoidState state;
  double phase_start_radius = state.radius_m;
  long phase_step = 0;
  double phase_j = current_density(std::min(ladder[li].n, workload.demanded_parallelism), em);

  auto record = [&](double t_s, double extra_ohm, int level_index) {
    AgingEvent ev;
    ev.t_s = t_s;
    if (level_index >= 0) {
      const Level& lv = ladder[level_index];
      ev.napsaa = lv.n;
      ev.max_droop_mv = engine.max_droop_mv(lv.placement, extra_ohm);
    } else {
      ev.napsaa = 0;
      ev.max_droop_mv = engine.max_droop_mv(ladder.back().placement, extra_ohm);
    }
    ev.tsv_resistance_ohm = r0 + extra_ohm;
    ev.void_radius_m = state.radius_m;
    tl.events.push_back(ev);
  };

  record(0.0, 0.0, 0);
  if (workload.active_fraction == 0.0) return tl;

  double t = 0.0;
  long steps_since_event = 0;
  while (true) {
    if (t + em.dt > horizon_s + 1e-9 * em.dt) break;

    int n_used = std::min(ladder[li].n, workload.demanded_parallelism);
    double j = current_density(n_used, em);
    if (j != phase_j) {
      phase_j = j;
      phase_start_radius = state.radius_m;
      phase_step = 0;
    }
    double jv = vacancy_flux(em, j);
    double dt_eff = em.dt * workload.active_fraction;
    double dr = em.alpha * em.f * em.omega * em.eps_tsv * std::fabs(jv) *
                dt_eff / em.delta;

    double r_prev = state.radius_m;
    double extra_prev = void_to_resistance(state, em, model, r0) - r0;
    phase_step += 1;
    state.radius_m = std::min(phase_start_radius + phase_step * dr, em.tsv_radius);
    state.elapsed_s += em.dt;
    double extra_new = void_to_resistance(state, em, model, r0) - r0;
    double t_next = t + em.dt;
    steps_since_event += 1;

    // Walk every derating threshold crossed inside this step, in order.
    while (li >= 0 && extra_new > ladder[li].max_extra_ohm) {
      double target = ladder[li].max_extra_ohm;
      double frac;
      if (std::isfinite(extra_new) && extra_new > extra_prev) {
        frac = (target - extra_prev) / (extra_new - extra_prev);
      } else {
        double r_target = resistance_to_radius(r0 + target, em, model, r0);
        frac = (r_target - r_prev) / (state.radius_m - r_prev);
      }
      frac = std::clamp(frac, 0.0, 1.0);
      double t_cross = t + frac * em.dt;
      int next_li = (li + 1 < static_cast<int>(ladder.size())) ? li + 1 : -1;
      li = next_li;
      record(t_cross, target, li);
      steps_since_event = 0;
      if (li < 0) {
        tl.lifetime_s = t_cross;
        return tl;
      }
    }

    t = t_next;
    if (steps_since_event >= 10) {
      record(t, extra_new, li);
      steps_since_event = 0;
    }
  }
  if (tl.events.empty() || tl.events.back().t_s != t) {
    double extra = void_to_resistance(state, em, model, r0) - r0;
    record(t, extra, li);
  }
  return tl;
}

AgingTimeline simulate_aging(const PdnLayout& layout, const ResistorNetwork& network,
                             const EmParams& em, const WorkloadProfile& workload,
                             double margin_mv, double horizon_s,
                             const VoidResistanceModel& model) {
  DroopEngine engine(layout, network);
  return simulate_aging(engine, em, workload, margin_mv, horizon_s, model);
}

long runs_until_failure(const WorkloadProfile& workload, double time_to_max_resistance_s) {
  if (!(workload.run_active_time_s > 0.0)) {
    fail("zero-active-time", "run_active_time_s must be > 0");
  }
  if (time_to_max_resistance_s < 0.0) {
    fail("invalid-params", "time budget must be >= 0");
  }
  return static_cast<long>(std::floor(time_to_max_resistance_s / workload.run_active_time_s));
}

std::optional<double> lifetime_years(const AgingTimeline& tl) {
  if (!tl.lifetime_s) return std::nullopt;
  return *tl.lifetime_s / kSecondsPerYear;
}

int timeline_transitions(const AgingTimeline& tl) {
  int count = 0;
  for (size_t i = 1; i < tl.events.size(); ++i) {
    if (tl.events[i].napsaa != tl.events[i - 1].napsaa) count += 1;
  }
  return count;
}

std::string timeline_csv(const AgingTimeline& tl) {
  std::string out = "t_s,t_years,napsaa,max_droop_mv,tsv_resistance_ohm,void_radius_m\n";
  for (const AgingEvent& ev : tl.events) {
    out += textio::fmt("%.5e,%.5e,%d,%.5e,%.5e,%.5e\n", ev.t_s,
                       ev.t_s / kSecondsPerYear, ev.napsaa, ev.max_droop_mv,
                       ev.tsv_resistance_ohm, ev.void_radius_m);
  }
  return out;
}

}  // namespace pdnsim

#include "pdnsim/run.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <system_error>
#include <vector>

#include "pdnsim/aging.hpp"
#include "pdnsim/error.hpp"
#include "pdnsim/irdrop.hpp"
#include "pdnsim/netlist.hpp"
#include "pdnsim/perf.hpp"
#include "pdnsim/solver.hpp"
#include "pdnsim/textio.hpp"

namespace fs = std::filesystem;

namespace pdnsim {

namespace {

struct DesignCtx {
  Design design = Design::clustered;
  PdnLayout layout;
  ResistorNetwork network;
  std::unique_ptr<DroopEngine> engine;
};

DesignCtx make_ctx(const RunConfig& cfg, Design d, bool with_engine) {
  DesignCtx ctx;
  ctx.design = d;
  ctx.layout = build_layout(d, cfg.pdn(d), cfg.stack);
  ctx.network = build_network(ctx.layout, cfg.pdn(d), cfg.stack);
  if (with_engine) {
    ctx.engine = std::make_unique<DroopEngine>(ctx.layout, ctx.network);
  }
  return ctx;
}

std::vector<WorkloadProfile> workloads_or_default(const RunConfig& cfg) {
  if (!cfg.workloads.empty()) return cfg.workloads;
  WorkloadProfile wl;
  wl.name = "default";
  return {wl};
}

// Collects every file the command writes so a failure can clean up after
// itself.
class Emitter {
 public:
  explicit Emitter(const std::string& out_dir) : dir_(out_dir) {}

  std::string write(const std::string& name, const std::string& content,
                    std::ostream& out) {
    fs::create_directories(dir_);
    fs::path p = dir_ / name;
    textio::write_file(p.string(), content);
    written_.push_back(p.string());
    out << "wrote " << p.string() << "\n";
    return p.string();
  }

  void discard_all() {
    for (const std::string& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

std::string years_text(const std::optional<double>& years) {
  return years ? textio::fmt("%.2f", *years) : std::string("none");
}

// Step-function value of an event series at time t.
double step_value(const std::vector<std::pair<double, double>>& series, double t) {
  double v = series.front().second;
  for (const auto& [tt, vv] : series) {
    if (tt <= t * (1.0 + 1e-12) + 1e-300) {
      v = vv;
    } else {
      break;
    }
  }
  return v;
}

struct AgingRun {
  AgingTimeline timeline;
  std::vector<std::pair<double, double>> edp;  // (t_years, edp_js)
};

AgingRun simulate_one(DesignCtx& ctx, const RunConfig& cfg, const WorkloadProfile& wl) {
  AgingRun run;
  run.timeline = simulate_aging(*ctx.engine, cfg.em, wl, cfg.margin_mv,
                                cfg.horizon_years * kSecondsPerYear,
                                cfg.void_model(ctx.design));
  run.edp = edp_over_lifetime(run.timeline, wl, cfg.timing);
  return run;
}

int cmd_layout(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, false);
    em.write("layout_" + design_name(d) + ".csv", layout_csv(ctx.layout), out);
  }
  return 0;
}

int cmd_netlist(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, false);
    em.write("netlist_" + design_name(d) + ".txt", netlist_text(ctx.network), out);
  }
  return 0;
}

int cmd_rw(const RunConfig& cfg, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    int sa = ctx.engine->worst_subarray();
    double r = ctx.engine->effective_resistance_ohm(sa);
    out << textio::fmt("%s: R_W = %.6g ohm (subarray %d)\n",
                       design_name(d).c_str(), r, sa);
  }
  return 0;
}

int cmd_irmap(const RunConfig& cfg, const CommandOptions& opts, Emitter& em,
              std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    PlacementPolicy policy = default_policy(d);
    int n = opts.n ? *opts.n : ctx.engine->napsaa(cfg.margin_mv, policy, 0.0);
    if (n < 1) fail("invalid-n", "no activation level satisfies the margin");
    LoadSet placement = ctx.engine->place(n, policy);
    IrDropMap map = ctx.engine->irdrop_map(placement, 0.0);
    em.write(textio::fmt("irmap_%s_n%d.csv", design_name(d).c_str(), n),
             irdrop_map_csv(map), out);
  }
  return 0;
}

int cmd_napsaa(const RunConfig& cfg, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    int n = ctx.engine->napsaa(cfg.margin_mv, default_policy(d), 0.0);
    out << design_name(d) << ": " << n << "\n";
  }
  return 0;
}

int cmd_headroom(const RunConfig& cfg, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    std::map<int, double> sched = headroom_schedule(*ctx.engine, cfg.margin_mv);
    int n_sa = static_cast<int>(ctx.network.load_points.size());
    for (int level : {32, 16, 8, 4, 2, 1}) {
      if (level > n_sa) continue;
      auto it = sched.find(level);
      if (it == sched.end()) {
        out << textio::fmt("%s %d: unachievable\n", design_name(d).c_str(), level);
      } else {
        out << textio::fmt("%s %d: %.6g ohm\n", design_name(d).c_str(), level,
                           it->second);
      }
    }
  }
  return 0;
}

int cmd_age(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    for (const WorkloadProfile& wl : workloads_or_default(cfg)) {
      AgingTimeline tl = simulate_aging(*ctx.engine, cfg.em, wl, cfg.margin_mv,
                                        cfg.horizon_years * kSecondsPerYear,
                                        cfg.void_model(d));
      em.write(textio::fmt("timeline_%s_%s.csv", design_name(d).c_str(),
                           wl.name.c_str()),
               timeline_csv(tl), out);
    }
  }
  return 0;
}

std::string summary_line(const AgingTimeline& tl) {
  return textio::fmt("design = %s, workload = %s, lifetime_years = %s, transitions = %d\n",
                     design_name(tl.design).c_str(), tl.workload.c_str(),
                     years_text(lifetime_years(tl)).c_str(), timeline_transitions(tl));
}

int cmd_lifetime(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  std::string summary;
  for (Design d : cfg.designs()) {
    DesignCtx ctx = make_ctx(cfg, d, true);
    for (const WorkloadProfile& wl : workloads_or_default(cfg)) {
      AgingTimeline tl = simulate_aging(*ctx.engine, cfg.em, wl, cfg.margin_mv,
                                        cfg.horizon_years * kSecondsPerYear,
                                        cfg.void_model(d));
      summary += summary_line(tl);
    }
  }
  em.write("lifetime_summary.txt", summary, out);
  return 0;
}

int cmd_perf(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  std::vector<Design> designs = cfg.designs();
  std::vector<DesignCtx> ctxs;
  for (Design d : designs) ctxs.push_back(make_ctx(cfg, d, true));
  for (const WorkloadProfile& wl : workloads_or_default(cfg)) {
    std::vector<AgingRun> runs;
    for (DesignCtx& ctx : ctxs) runs.push_back(simulate_one(ctx, cfg, wl));
    // Baseline: the first in-scope design's age-zero estimate (clustered when
    // both designs run).
    double baseline = runs.front().edp.front().second;
    for (size_t i = 0; i < ctxs.size(); ++i) {
      em.write(textio::fmt("edp_%s_%s.csv", design_name(designs[i]).c_str(),
                           wl.name.c_str()),
               edp_csv(runs[i].edp, baseline), out);
    }
  }
  return 0;
}

int cmd_compare(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  DesignCtx clustered = make_ctx(cfg, Design::clustered, true);
  DesignCtx distributed = make_ctx(cfg, Design::distributed, true);
  std::vector<WorkloadProfile> wls = workloads_or_default(cfg);

  std::string summary;
  std::string report = "# power-delivery aging comparison, clustered vs distributed\n";
  double ratio_sum = 0.0;
  int ratio_count = 0;
  bool edp_ok_all = true;

  for (const WorkloadProfile& wl : wls) {
    AgingRun rc = simulate_one(clustered, cfg, wl);
    AgingRun rd = simulate_one(distributed, cfg, wl);
    em.write(textio::fmt("timeline_clustered_%s.csv", wl.name.c_str()),
             timeline_csv(rc.timeline), out);
    em.write(textio::fmt("timeline_distributed_%s.csv", wl.name.c_str()),
             timeline_csv(rd.timeline), out);
    double baseline = rc.edp.front().second;
    em.write(textio::fmt("edp_clustered_%s.csv", wl.name.c_str()),
             edp_csv(rc.edp, baseline), out);
    em.write(textio::fmt("edp_distributed_%s.csv", wl.name.c_str()),
             edp_csv(rd.edp, baseline), out);
    summary += summary_line(rc.timeline);
    summary += summary_line(rd.timeline);

    auto lc = lifetime_years(rc.timeline);
    auto ld = lifetime_years(rd.timeline);
    std::string ratio = "n/a";
    if (lc && ld && *lc > 0.0) {
      ratio = textio::fmt("%.2f", *ld / *lc);
      ratio_sum += *ld / *lc;
      ratio_count += 1;
    }
    bool edp_ok = true;
    std::vector<double> times;
    for (const auto& [t, v] : rc.edp) {
      (void)v;
      times.push_back(t);
    }
    for (const auto& [t, v] : rd.edp) {
      (void)v;
      times.push_back(t);
    }
    for (double t : times) {
      if (!(step_value(rd.edp, t) <= step_value(rc.edp, t))) edp_ok = false;
    }
    edp_ok_all = edp_ok_all && edp_ok;
    report += textio::fmt(
        "# workload %s: lifetime clustered = %s y, distributed = %s y, "
        "ratio = %s, edp ordering = %s\n",
        wl.name.c_str(), years_text(lc).c_str(), years_text(ld).c_str(),
        ratio.c_str(), edp_ok ? "pass" : "fail");
  }
  em.write("lifetime_summary.txt", summary, out);

  if (ratio_count > 0) {
    report += textio::fmt("# mean lifetime ratio = %.2f\n", ratio_sum / ratio_count);
  } else {
    report += "# mean lifetime ratio = n/a\n";
  }
  report += textio::fmt("# edp ordering overall = %s\n", edp_ok_all ? "pass" : "fail");
  report += "# exact configuration used (machine-readable):\n";
  report += render_config(cfg);
  em.write("compare_report.txt", report, out);
  return 0;
}

}  // namespace

int run_command(const std::string& cmd, const RunConfig& config,
                const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  Emitter em(config.out_dir);
  try {
    if (cmd == "layout") return cmd_layout(config, em, out);
    if (cmd == "netlist") return cmd_netlist(config, em, out);
    if (cmd == "rw") return cmd_rw(config, out);
    if (cmd == "irmap") return cmd_irmap(config, opts, em, out);
    if (cmd == "napsaa") return cmd_napsaa(config, out);
    if (cmd == "headroom") return cmd_headroom(config, out);
    if (cmd == "age") return cmd_age(config, em, out);
    if (cmd == "lifetime") return cmd_lifetime(config, em, out);
    if (cmd == "perf") return cmd_perf(config, em, out);
    if (cmd == "compare") return cmd_compare(config, em, out);
    fail("unknown-command", cmd);
  } catch (const std::exception& e) {
    em.discard_all();
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace pdnsim

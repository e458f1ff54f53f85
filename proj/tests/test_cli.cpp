#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "fixtures.hpp"
#include "pdnsim/config.hpp"
#include "pdnsim/irdrop.hpp"
#include "pdnsim/netlist.hpp"
#include "pdnsim/run.hpp"
#include "pdnsim/textio.hpp"

using namespace pdnsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pdnsim_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

// Downscaled rail grid; the same levels survive as at full scale, and every
// command finishes in well under a second.
RunConfig smoke_config(const std::string& out_dir) {
  RunConfig c = parse_config(
      "margin_mv = 300\n"
      "horizon_years = 1\n"
      "em.dt = 5e5\n"
      "pdn.vertical_rails = 24\n"
      "pdn.horizontal_rails = 32\n");
  c.out_dir = out_dir;
  WorkloadProfile alpha;
  alpha.name = "alpha";
  alpha.active_fraction = 0.5;
  alpha.demanded_parallelism = 4;
  alpha.run_active_time_s = 3600.0;
  alpha.request_rate = 1e7;
  WorkloadProfile beta;
  beta.name = "beta";
  beta.active_fraction = 1.0;
  beta.demanded_parallelism = 32;
  beta.run_active_time_s = 1800.0;
  beta.request_rate = 2e7;
  c.workloads = {alpha, beta};
  return c;
}

int run(const std::string& cmd, const RunConfig& cfg, std::string& out_s,
        std::string& err_s, CommandOptions opts = {}) {
  std::ostringstream out, err;
  int rc = run_command(cmd, cfg, opts, out, err);
  out_s = out.str();
  err_s = err.str();
  return rc;
}

std::vector<std::string> dir_files(const fs::path& dir) {
  std::vector<std::string> names;
  if (!fs::exists(dir)) return names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("napsaa prints one level per design") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("napsaa", cfg, out, err) == 0);
  CHECK(out == "clustered: 4\ndistributed: 32\n");
  CHECK(err.empty());
  CHECK_FALSE(fs::exists(dir.path));
}

TEST_CASE("rw reports the measured worst-subarray resistance") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("rw", cfg, out, err) == 0);
  auto lines = textio::split_lines(out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].rfind("clustered: R_W = ", 0) == 0);
  CHECK(lines[1].rfind("distributed: R_W = ", 0) == 0);

  PdnLayout layout = build_layout(Design::clustered, cfg.pdn(Design::clustered),
                                  cfg.stack);
  ResistorNetwork net = build_network(layout, cfg.pdn(Design::clustered), cfg.stack);
  DroopEngine engine(layout, net);
  double expected = engine.effective_resistance_ohm(engine.worst_subarray());
  double reported = 0.0;
  int subarray = -1;
  REQUIRE(std::sscanf(lines[0].c_str(), "clustered: R_W = %lf ohm (subarray %d)",
                      &reported, &subarray) == 2);
  CHECK(reported == doctest::Approx(expected).epsilon(1e-5));
  CHECK(subarray == engine.worst_subarray());
}

TEST_CASE("headroom lists every level with its tolerable extra resistance") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("headroom", cfg, out, err) == 0);
  auto lines = textio::split_lines(out);
  REQUIRE(lines.size() == 12);
  CHECK(out.find("clustered 32: unachievable\n") != std::string::npos);
  CHECK(out.find("clustered 4: ") != std::string::npos);
  CHECK(out.find("distributed 32: ") != std::string::npos);
  for (const std::string& line : lines) {
    CHECK((line.find(" ohm") != std::string::npos ||
           line.find("unachievable") != std::string::npos));
  }
}

TEST_CASE("file commands write into the configured directory") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;

  CHECK(run("layout", cfg, out, err) == 0);
  CHECK(dir_files(dir.path) ==
        std::vector<std::string>{"layout_clustered.csv", "layout_distributed.csv"});
  for (const std::string& line : textio::split_lines(out)) {
    REQUIRE(line.rfind("wrote ", 0) == 0);
    CHECK(fs::exists(line.substr(6)));
  }

  CHECK(run("netlist", cfg, out, err) == 0);
  CHECK(run("irmap", cfg, out, err) == 0);
  CHECK(run("age", cfg, out, err) == 0);
  CHECK(run("lifetime", cfg, out, err) == 0);
  CHECK(run("perf", cfg, out, err) == 0);
  std::vector<std::string> files = dir_files(dir.path);
  for (const char* name :
       {"netlist_clustered.txt", "netlist_distributed.txt", "irmap_clustered_n4.csv",
        "irmap_distributed_n32.csv", "timeline_clustered_alpha.csv",
        "timeline_clustered_beta.csv", "timeline_distributed_alpha.csv",
        "timeline_distributed_beta.csv", "lifetime_summary.txt", "edp_clustered_alpha.csv",
        "edp_clustered_beta.csv", "edp_distributed_alpha.csv",
        "edp_distributed_beta.csv"}) {
    CAPTURE(name);
    CHECK(std::find(files.begin(), files.end(), name) != files.end());
  }
}

TEST_CASE("the lifetime summary states every design and workload pair") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("lifetime", cfg, out, err) == 0);
  std::string summary = textio::read_file((dir.path / "lifetime_summary.txt").string());
  auto lines = textio::split_lines(summary);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("design = clustered, workload = alpha, lifetime_years = ", 0) ==
        0);
  for (const std::string& line : lines) {
    CHECK(line.find(", transitions = ") != std::string::npos);
  }
}

TEST_CASE("perf normalizes every trajectory to the clustered age-zero point") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("perf", cfg, out, err) == 0);
  std::string csv =
      textio::read_file((dir.path / "edp_clustered_alpha.csv").string());
  auto lines = textio::split_lines(csv);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[1].find(",1.00000e+00") != std::string::npos);

  csv = textio::read_file((dir.path / "edp_distributed_alpha.csv").string());
  lines = textio::split_lines(csv);
  double t = 0.0, edp = 0.0, norm = 0.0;
  REQUIRE(std::sscanf(lines[1].c_str(), "%lf,%lf,%lf", &t, &edp, &norm) == 3);
  CHECK(t == 0.0);
  CHECK(norm < 1.0);
  CHECK(norm > 0.0);
}

TEST_CASE("compare output is byte-reproducible") {
  TempDir a, b;
  RunConfig ca = smoke_config(a.path.string());
  RunConfig cb = smoke_config(b.path.string());
  std::string out, err;
  REQUIRE(run("compare", ca, out, err) == 0);
  REQUIRE(run("compare", cb, out, err) == 0);

  std::vector<std::string> fa = dir_files(a.path);
  REQUIRE(fa == dir_files(b.path));
  REQUIRE(fa.size() == 10);
  for (const std::string& name : fa) {
    std::string ta = textio::read_file((a.path / name).string());
    std::string tb = textio::read_file((b.path / name).string());
    if (name == "compare_report.txt") {
      // The report embeds the output directory; everything else must match.
      auto la = textio::split_lines(ta);
      auto lb = textio::split_lines(tb);
      REQUIRE(la.size() == lb.size());
      for (size_t i = 0; i < la.size(); ++i) {
        if (la[i].rfind("out_dir = ", 0) == 0) continue;
        CHECK(la[i] == lb[i]);
      }
    } else {
      CAPTURE(name);
      CHECK(ta == tb);
    }
  }
}

TEST_CASE("unknown commands fail without touching the filesystem") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CHECK(run("explode", cfg, out, err) == 1);
  CHECK(err.find("unknown-command") != std::string::npos);
  CHECK(err.find("explode") != std::string::npos);
  CHECK(out.empty());
  CHECK(dir_files(dir.path).empty());
}

TEST_CASE("irmap rejects an unreachable activation level") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  std::string out, err;
  CommandOptions opts;
  opts.n = 33;
  CHECK(run("irmap", cfg, out, err, opts) == 1);
  CHECK(err.find("invalid-n") != std::string::npos);
  CHECK(dir_files(dir.path).empty());

  RunConfig strict = cfg;
  strict.margin_mv = 0.001;
  strict.pdn_clustered.ir_margin_mv = 0.001;
  strict.pdn_distributed.ir_margin_mv = 0.001;
  CHECK(run("irmap", strict, out, err) == 1);
  CHECK(err.find("invalid-n") != std::string::npos);
}

TEST_CASE("a failing run removes its partial outputs") {
  TempDir dir;
  RunConfig cfg = smoke_config(dir.path.string());
  WorkloadProfile broken = cfg.workloads[0];
  broken.name = "broken";
  broken.demanded_parallelism = 40;
  cfg.workloads.push_back(broken);

  std::string out, err;
  CHECK(run("age", cfg, out, err) == 1);
  CHECK(err.find("invalid-params") != std::string::npos);
  // The two good timelines were written before the bad workload aborted the
  // command; the cleanup pass must have removed them again.
  CHECK(out.find("wrote ") != std::string::npos);
  CHECK(dir_files(dir.path).empty());
}

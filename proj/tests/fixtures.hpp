#pragma once

// Shared test fixtures: the repo's canonical configuration (parsed and built
// once per process) plus small hand-built networks with closed-form answers.

#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pdnsim/config.hpp"
#include "pdnsim/irdrop.hpp"
#include "pdnsim/netlist.hpp"

namespace fixtures {

inline std::string repo_path(const std::string& rel) {
  return std::string(PDNSIM_REPO_DIR) + "/" + rel;
}

inline const pdnsim::RunConfig& canonical_config() {
  static const pdnsim::RunConfig cfg =
      pdnsim::parse_config_file(repo_path("configs/canonical.conf"));
  return cfg;
}

struct DesignFixture {
  pdnsim::PdnLayout layout;
  pdnsim::ResistorNetwork network;
  std::unique_ptr<pdnsim::DroopEngine> engine;
};

// Built lazily and cached for the whole test binary; the canonical grids are
// large enough that rebuilding per test case would dominate the runtime.
inline DesignFixture& canonical_fixture(pdnsim::Design d) {
  static auto make = [](pdnsim::Design dd) {
    const pdnsim::RunConfig& cfg = canonical_config();
    auto fx = std::make_unique<DesignFixture>();
    fx->layout = pdnsim::build_layout(dd, cfg.pdn(dd), cfg.stack);
    fx->network = pdnsim::build_network(fx->layout, cfg.pdn(dd), cfg.stack);
    fx->engine = std::make_unique<pdnsim::DroopEngine>(fx->layout, fx->network);
    return fx;
  };
  static std::unique_ptr<DesignFixture> clustered = make(pdnsim::Design::clustered);
  static std::unique_ptr<DesignFixture> distributed = make(pdnsim::Design::distributed);
  return d == pdnsim::Design::clustered ? *clustered : *distributed;
}

// Supply -> R -> load on the P side; the G net holds nothing but its supply
// terminal. A load I across R droops exactly I * R.
inline pdnsim::ResistorNetwork toy_single_path(double resistance_ohm = 1.0) {
  using namespace pdnsim;
  ResistorNetwork net;
  net.nodes = {
      Node{0, Polarity::P, 2, 0, 0},
      Node{1, Polarity::P, 0, -1, -1},
      Node{2, Polarity::G, 0, -1, -1},
  };
  net.edges = {Edge{1, 0, 1.0 / resistance_ohm}};
  net.supply_p = 1;
  net.supply_g = 2;
  net.load_points[1] = {0, 2};
  net.load_current_a = 0.1;
  return net;
}

// One P chain and one G chain of equal resistance, so the loop resistance is
// twice the per-side value. Both edges are registered as TSV chains, which
// makes apply_tsv_resistance and headroom sweeps work on the fixture.
inline pdnsim::ResistorNetwork toy_series(double per_side_ohm = 1.0) {
  using namespace pdnsim;
  ResistorNetwork net;
  net.nodes = {
      Node{0, Polarity::P, 2, 0, 0},
      Node{1, Polarity::P, 0, -1, -1},
      Node{2, Polarity::G, 2, 0, 0},
      Node{3, Polarity::G, 0, -1, -1},
  };
  net.edges = {Edge{1, 0, 1.0 / per_side_ohm}, Edge{3, 2, 1.0 / per_side_ohm}};
  net.supply_p = 1;
  net.supply_g = 3;
  net.load_points[1] = {0, 2};
  net.tsv_edges[0] = {0};
  net.tsv_edges[1] = {1};
  net.chain_base_ohm = per_side_ohm;
  net.load_current_a = 0.1;
  return net;
}

// Single-subarray layout stub for engine calls against hand-built networks.
inline pdnsim::PdnLayout toy_layout() {
  pdnsim::PdnLayout layout;
  layout.design = pdnsim::Design::clustered;
  layout.bank_width_um = 10.0;
  layout.bank_height_um = 10.0;
  layout.subarray_centers = {{5.0, 5.0}};
  pdnsim::Section sec;
  sec.y_min_um = 0.0;
  sec.y_max_um = 10.0;
  sec.subarray_ids = {1};
  layout.sections.push_back(sec);
  return layout;
}

struct ToyGrid {
  pdnsim::ResistorNetwork net;
  // (node_a, node_b, conductance) per net over global ids, supply taps
  // included; shared verbatim with the dense reference solver.
  std::vector<std::tuple<int, int, double>> p_edges;
  std::vector<std::tuple<int, int, double>> g_edges;
  int p_supply = 18;
  int g_supply = 19;
};

// 3x3 mesh per net with distinct edge conductances and three load points.
inline ToyGrid toy_grid_3x3() {
  using namespace pdnsim;
  ToyGrid toy;
  ResistorNetwork& net = toy.net;
  net.nodes.resize(20);
  for (int i = 0; i < 9; ++i) net.nodes[i] = Node{i, Polarity::P, 2, i % 3, i / 3};
  for (int i = 0; i < 9; ++i) {
    net.nodes[9 + i] = Node{9 + i, Polarity::G, 2, i % 3, i / 3};
  }
  net.nodes[18] = Node{18, Polarity::P, 0, -1, -1};
  net.nodes[19] = Node{19, Polarity::G, 0, -1, -1};
  net.supply_p = toy.p_supply;
  net.supply_g = toy.g_supply;

  double g = 0.9;
  auto add = [&](std::vector<std::tuple<int, int, double>>& list, int a, int b) {
    g += 0.13;
    list.emplace_back(a, b, g);
    net.edges.push_back(Edge{a, b, g});
  };
  for (int base : {0, 9}) {
    auto& list = base == 0 ? toy.p_edges : toy.g_edges;
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x + 1 < 3; ++x) add(list, base + y * 3 + x, base + y * 3 + x + 1);
    }
    for (int y = 0; y + 1 < 3; ++y) {
      for (int x = 0; x < 3; ++x) add(list, base + y * 3 + x, base + (y + 1) * 3 + x);
    }
  }
  add(toy.p_edges, toy.p_supply, 0);
  add(toy.g_edges, toy.g_supply, 9);

  net.load_points[1] = {4, 13};
  net.load_points[2] = {8, 17};
  net.load_points[3] = {0, 9};
  net.load_current_a = 0.1;
  return toy;
}

struct ToyBuilt {
  pdnsim::PdnLayout layout;
  pdnsim::PdnParams params;
  pdnsim::StackConfig stack;
  pdnsim::ResistorNetwork net;
};

// build_network output small enough to enumerate by hand: one DRAM tier, a
// 2x2 rail grid, one P and one G TSV, one subarray.
inline ToyBuilt toy_built_2x2() {
  using namespace pdnsim;
  ToyBuilt t;
  t.stack.dram_layers = 1;
  t.stack.subarrays_per_bank = 1;
  t.params.vertical_rails = 2;
  t.params.horizontal_rails = 2;
  t.params.tsvs_per_line = 2;
  t.params.tsv_pitch_um = 21.0;
  t.params.rail_width_um = 2.0;
  t.params.sheet_resistance_ohm_sq = 0.5;
  t.params.tsv_c4_resistance_ohm = 0.25;

  t.layout.design = Design::clustered;
  t.layout.bank_width_um = 42.0;
  t.layout.bank_height_um = 41.3;
  t.layout.tsv_sites = {
      TsvSite{10.5, 0.0, Polarity::P},
      TsvSite{31.5, 41.3, Polarity::G},
  };
  t.layout.subarray_centers = {{21.0, 20.65}};
  Section sec;
  sec.y_min_um = 0.0;
  sec.y_max_um = 41.3;
  sec.subarray_ids = {1};
  t.layout.sections.push_back(sec);

  t.net = build_network(t.layout, t.params, t.stack);
  return t;
}

}  // namespace fixtures

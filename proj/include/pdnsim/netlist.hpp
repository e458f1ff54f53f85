#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdnsim/geometry.hpp"

namespace pdnsim {

struct Node {
  int id = 0;
  Polarity net = Polarity::P;
  // 0 = package bump plane, 1 = logic layer, 2.. = DRAM tiers.
  int layer = 0;
  // Rail-grid indices; -1 for bump/supply nodes.
  int grid_x = -1;
  int grid_y = -1;
};

struct Edge {
  int a = 0;
  int b = 0;
  double conductance = 0.0;
};

struct LoadSet {
  // subarray id -> drawn current in amps
  std::map<int, double> entries;
};

struct LoadContact {
  int node = 0;
  double weight = 0.0;
};

struct ResistorNetwork {
  Design design = Design::clustered;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int supply_p = -1;
  int supply_g = -1;
  // subarray id -> (p_node, g_node) measurement points on the top DRAM tier
  std::map<int, std::pair<int, int>> load_points;
  // tsv index (order of layout.tsv_sites) -> edge ids of that TSV's chain
  std::map<int, std::vector<int>> tsv_edges;
  // Current attachment: a subarray's draw is spread over these weighted nodes
  // (the full top-tier rail row for built networks). When a subarray has no
  // contact list the solver falls back to its load_points node.
  std::map<int, std::vector<LoadContact>> load_contacts_p;
  std::map<int, std::vector<LoadContact>> load_contacts_g;

  double supply_voltage_v = 1.5;
  // Total series resistance of one TSV chain at build time, and the uniform
  // extra currently applied on top of it.
  double chain_base_ohm = 0.0;
  double chain_extra_ohm = 0.0;
  // Default per-subarray activation current in amps.
  double load_current_a = 0.1;

  // Rail-grid shape for networks produced by build_network; grid_nx == 0 for
  // hand-built fixtures.
  int grid_nx = 0;
  int grid_ny = 0;
  int tiers = 0;

  int p_grid_node(int tier, int gx, int gy) const {
    return (tier * grid_ny + gy) * grid_nx + gx;
  }
  int g_grid_node(int tier, int gx, int gy) const {
    return tiers * grid_ny * grid_nx + (tier * grid_ny + gy) * grid_nx + gx;
  }
};

ResistorNetwork build_network(const PdnLayout& layout, const PdnParams& params,
                              const StackConfig& stack);

// Returns a copy whose TSV chains each total chain_base_ohm + per_tsv_extra_ohm,
// redistributed evenly over their tier segments. The input is unmodified.
ResistorNetwork apply_tsv_resistance(const ResistorNetwork& network,
                                     double per_tsv_extra_ohm);

// Flat resistor list, one line per edge: R<edge_id> <node_a> <node_b> <ohms>.
std::string netlist_text(const ResistorNetwork& network);

}  // namespace pdnsim

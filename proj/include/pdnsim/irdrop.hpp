#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pdnsim/netlist.hpp"

namespace pdnsim {

enum class PlacementPolicy { adversarial_greedy, uniform_per_section };

PlacementPolicy default_policy(Design design);

struct IrDropMap {
  Design design = Design::clustered;
  int n_saa = 0;
  LoadSet placement;
  int nx = 0;
  int ny = 0;
  // Row-major, row 0 = bank bottom edge; droop in mV on the top tier.
  std::vector<double> grid_mv;
  double max_droop_mv = 0.0;
  int argmax_x = 0;
  int argmax_y = 0;

  double at(int gx, int gy) const { return grid_mv[gy * nx + gx]; }
};

// Shared solve state for one (layout, network) pair. Factorizes each net once
// and answers droop queries at any uniform per-TSV extra resistance via a
// low-rank update of the TSV chain conductances, so placement sweeps,
// headroom bisections, and aging re-solves stay cheap. Small hand-built
// fixtures without a rail grid fall back to full solves per query.
class DroopEngine {
 public:
  DroopEngine(const PdnLayout& layout, const ResistorNetwork& network);
  ~DroopEngine();
  DroopEngine(DroopEngine&&) noexcept;
  DroopEngine& operator=(DroopEngine&&) noexcept;

  const PdnLayout& layout() const;
  const ResistorNetwork& network() const;

  // Max top-tier droop (mV) under the given loads with extra_ohm added
  // uniformly to every TSV chain on top of the network's current state.
  double max_droop_mv(const LoadSet& loads, double extra_ohm = 0.0);
  IrDropMap irdrop_map(const LoadSet& loads, double extra_ohm = 0.0);
  double effective_resistance_ohm(int subarray_id);
  int worst_subarray() ;

  LoadSet place(int n, PlacementPolicy policy);
  int napsaa(double margin_mv, PlacementPolicy policy, double extra_ohm = 0.0);
  double headroom(int n, double margin_mv, PlacementPolicy policy);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

IrDropMap compute_irdrop_map(const ResistorNetwork& network, const LoadSet& loads);

LoadSet place_saas(const PdnLayout& layout, const ResistorNetwork& network, int n,
                   PlacementPolicy policy);

// Largest n in {32,16,8,4,2,1} whose placed map stays within margin_mv; 0 if
// even n = 1 violates.
int find_napsaa(const PdnLayout& layout, const ResistorNetwork& network,
                double margin_mv, PlacementPolicy policy);

// Maximal uniform per-TSV extra resistance keeping the placed n-SAA map
// within margin_mv (bisection to 1e-4 ohm over [0, 100 ohm]).
double resistance_headroom(const PdnLayout& layout, const ResistorNetwork& network,
                           int n, double margin_mv);

std::string irdrop_map_csv(const IrDropMap& map);
IrDropMap parse_irdrop_map_csv(const std::string& text);

}  // namespace pdnsim

#pragma once

#include <vector>

#include "pdnsim/netlist.hpp"

namespace pdnsim {

struct SolveResult {
  // Indexed by node id. supply_p reads supply_voltage, supply_g reads 0.
  std::vector<double> voltages;
  // Relative residual of the nodal system (max over the two nets).
  double residual = 0.0;
  // Iterative-refinement passes applied on top of the direct factorization.
  int iterations = 0;
};

SolveResult solve_node_voltages(const ResistorNetwork& network, const LoadSet& loads,
                                double tolerance = 1e-9);

// Loop resistance supply -> P net -> subarray -> G net -> supply for a unit
// load at the given subarray alone.
double effective_resistance(const ResistorNetwork& network, int subarray_id);

// Largest tolerable current for a given worst-case loop resistance and droop
// margin: margin / r_worst.
double peak_current(double r_worst_ohm, double margin_mv);

}  // namespace pdnsim

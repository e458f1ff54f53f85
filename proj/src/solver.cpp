#include "pdnsim/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

namespace {

struct NetSystem {
  std::vector<int> local;  // node id -> local index, -1 for other net / supply
  std::vector<int> ids;    // local index -> node id
  Eigen::SparseMatrix<double> a;
};

NetSystem assemble_net(const ResistorNetwork& net, Polarity pol) {
  NetSystem sys;
  int supply = (pol == Polarity::P) ? net.supply_p : net.supply_g;
  sys.local.assign(net.nodes.size(), -1);
  for (const Node& n : net.nodes) {
    if (n.net == pol && n.id != supply) {
      sys.local[n.id] = static_cast<int>(sys.ids.size());
      sys.ids.push_back(n.id);
    }
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(net.edges.size() * 4);
  for (const Edge& e : net.edges) {
    if (net.nodes[e.a].net != pol || net.nodes[e.b].net != pol) {
      if (net.nodes[e.a].net != net.nodes[e.b].net) {
        fail("invalid-params", "edge couples the P and G nets");
      }
      continue;
    }
    if (!(e.conductance > 0.0) || !std::isfinite(e.conductance)) {
      fail("invalid-params", "edge conductance must be positive and finite");
    }
    int la = sys.local[e.a];
    int lb = sys.local[e.b];
    if (la >= 0) trips.emplace_back(la, la, e.conductance);
    if (lb >= 0) trips.emplace_back(lb, lb, e.conductance);
    if (la >= 0 && lb >= 0) {
      trips.emplace_back(la, lb, -e.conductance);
      trips.emplace_back(lb, la, -e.conductance);
    }
  }
  int n = static_cast<int>(sys.ids.size());
  sys.a.resize(n, n);
  sys.a.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Eigen::VectorXd load_vector(const ResistorNetwork& net, const NetSystem& sys,
                            Polarity pol, const LoadSet& loads) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.ids.size());
  const auto& contact_map =
      (pol == Polarity::P) ? net.load_contacts_p : net.load_contacts_g;
  for (const auto& [sa, current] : loads.entries) {
    if (current < 0.0) fail("invalid-params", "load currents must be >= 0");
    auto lp = net.load_points.find(sa);
    if (lp == net.load_points.end()) {
      fail("invalid-params", textio::fmt("load references unknown subarray %d", sa));
    }
    auto it = contact_map.find(sa);
    if (it != contact_map.end() && !it->second.empty()) {
      for (const LoadContact& c : it->second) {
        int l = sys.local[c.node];
        if (l < 0) fail("invalid-params", "load contact on supply or foreign net");
        b[l] += current * c.weight;
      }
    } else {
      int node = (pol == Polarity::P) ? lp->second.first : lp->second.second;
      int l = sys.local[node];
      if (l < 0) fail("invalid-params", "load point on supply or foreign net");
      b[l] += current;
    }
  }
  return b;
}

}  // namespace

SolveResult solve_node_voltages(const ResistorNetwork& network, const LoadSet& loads,
                                double tolerance) {
  SolveResult result;
  result.voltages.assign(network.nodes.size(), 0.0);
  if (network.supply_p < 0 || network.supply_g < 0) {
    fail("invalid-params", "network lacks supply terminals");
  }
  result.voltages[network.supply_p] = network.supply_voltage_v;
  result.voltages[network.supply_g] = 0.0;

  for (Polarity pol : {Polarity::P, Polarity::G}) {
    NetSystem sys = assemble_net(network, pol);
    if (sys.ids.empty()) continue;
    Eigen::VectorXd b = load_vector(network, sys, pol, loads);

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    llt.compute(sys.a);
    if (llt.info() != Eigen::Success) {
      fail("singular-system",
           textio::fmt("%s net nodal matrix is not SPD (disconnected?)",
                       pol == Polarity::P ? "P" : "G"));
    }
    Eigen::VectorXd u = llt.solve(b);

    double bnorm = b.norm();
    double rel = 0.0;
    if (bnorm > 0.0) {
      rel = (sys.a * u - b).norm() / bnorm;
      int passes = 0;
      while (rel > tolerance && passes < 3) {
        Eigen::VectorXd correction = llt.solve(b - sys.a * u);
        u += correction;
        rel = (sys.a * u - b).norm() / bnorm;
        ++passes;
      }
      result.iterations += passes;
      if (rel > tolerance) {
        fail("non-convergence",
             textio::fmt("residual %.3e above tolerance %.3e", rel, tolerance));
      }
    }
    result.residual = std::max(result.residual, rel);

    for (size_t i = 0; i < sys.ids.size(); ++i) {
      double droop = u[static_cast<int>(i)];
      result.voltages[sys.ids[i]] = (pol == Polarity::P)
                                        ? network.supply_voltage_v - droop
                                        : droop;
    }
  }
  return result;
}

double effective_resistance(const ResistorNetwork& network, int subarray_id) {
  if (!network.load_points.count(subarray_id)) {
    fail("invalid-params",
         textio::fmt("subarray %d has no load point", subarray_id));
  }
  LoadSet unit;
  unit.entries[subarray_id] = 1.0;
  SolveResult r = solve_node_voltages(network, unit);
  auto [p_node, g_node] = network.load_points.at(subarray_id);
  double droop = (network.supply_voltage_v - r.voltages[p_node]) + r.voltages[g_node];
  return droop;
}

double peak_current(double r_worst_ohm, double margin_mv) {
  if (!(r_worst_ohm > 0.0)) fail("non-positive-resistance", "r_worst must be > 0");
  return (margin_mv / 1000.0) / r_worst_ohm;
}

}  // namespace pdnsim

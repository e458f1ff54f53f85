#include "pdnsim/netlist.hpp"

#include <cmath>
#include <queue>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

namespace {

int snap_index(double coord, double pitch, int count) {
  long idx = std::llround(coord / pitch);
  if (idx < 0) idx = 0;
  if (idx >= count) idx = count - 1;
  return static_cast<int>(idx);
}

void check_connected(const ResistorNetwork& net) {
  std::vector<std::vector<int>> adj(net.nodes.size());
  for (const Edge& e : net.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (Polarity pol : {Polarity::P, Polarity::G}) {
    int start = (pol == Polarity::P) ? net.supply_p : net.supply_g;
    std::vector<char> seen(net.nodes.size(), 0);
    std::queue<int> q;
    seen[start] = 1;
    q.push(start);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    for (const Node& node : net.nodes) {
      if (node.net == pol && !seen[node.id]) {
        fail("disconnected-net",
             textio::fmt("%s net node %d unreachable from its supply",
                         pol == Polarity::P ? "P" : "G", node.id));
      }
    }
  }
}

}  // namespace

ResistorNetwork build_network(const PdnLayout& layout, const PdnParams& params,
                              const StackConfig& stack) {
  validate_params(params, stack);
  const int nx = params.vertical_rails;
  const int ny = params.horizontal_rails;
  const int nt = stack.dram_layers;
  const double w = layout.bank_width_um;
  const double h = layout.bank_height_um;
  const double dx = w / (nx - 1);
  const double dy = h / (ny - 1);

  ResistorNetwork net;
  net.design = layout.design;
  net.grid_nx = nx;
  net.grid_ny = ny;
  net.tiers = nt;
  net.supply_voltage_v = params.supply_voltage_v;
  net.load_current_a = params.current_per_saa_ma / 1000.0;
  net.chain_base_ohm = params.tsv_c4_per_tier
                           ? params.tsv_c4_resistance_ohm * nt
                           : params.tsv_c4_resistance_ohm;
  net.chain_extra_ohm = 0.0;

  const int per_net = nt * ny * nx;
  net.nodes.resize(2 * per_net + 2);
  for (int which = 0; which < 2; ++which) {
    Polarity pol = which == 0 ? Polarity::P : Polarity::G;
    for (int t = 0; t < nt; ++t) {
      for (int gy = 0; gy < ny; ++gy) {
        for (int gx = 0; gx < nx; ++gx) {
          int id = which * per_net + (t * ny + gy) * nx + gx;
          net.nodes[id] = Node{id, pol, 2 + t, gx, gy};
        }
      }
    }
  }
  net.supply_p = 2 * per_net;
  net.supply_g = 2 * per_net + 1;
  net.nodes[net.supply_p] = Node{net.supply_p, Polarity::P, 0, -1, -1};
  net.nodes[net.supply_g] = Node{net.supply_g, Polarity::G, 0, -1, -1};

  // Rail segments. R = sheet * length / width, assembled as conductances.
  const double g_h = params.rail_width_um / (params.sheet_resistance_ohm_sq * dx);
  const double g_v = params.rail_width_um / (params.sheet_resistance_ohm_sq * dy);
  for (int which = 0; which < 2; ++which) {
    int off = which * per_net;
    for (int t = 0; t < nt; ++t) {
      for (int gy = 0; gy < ny; ++gy) {
        for (int gx = 0; gx + 1 < nx; ++gx) {
          int a = off + (t * ny + gy) * nx + gx;
          net.edges.push_back(Edge{a, a + 1, g_h});
        }
      }
      for (int gy = 0; gy + 1 < ny; ++gy) {
        for (int gx = 0; gx < nx; ++gx) {
          int a = off + (t * ny + gy) * nx + gx;
          net.edges.push_back(Edge{a, a + nx, g_v});
        }
      }
    }
  }

  // TSV chains: bump -> tier 0 tap -> ... -> top tier tap, nt equal segments.
  const double seg_g = nt / net.chain_base_ohm;
  for (size_t i = 0; i < layout.tsv_sites.size(); ++i) {
    const TsvSite& site = layout.tsv_sites[i];
    int gx = snap_index(site.x_um, dx, nx);
    int gy = snap_index(site.y_um, dy, ny);
    if (std::fabs(site.x_um - gx * dx) > dx + 1e-9 ||
        std::fabs(site.y_um - gy * dy) > dy + 1e-9) {
      fail("degenerate-geometry",
           textio::fmt("TSV %zu at (%.3f, %.3f) um has no rail node within one pitch",
                       i, site.x_um, site.y_um));
    }
    int off = (site.polarity == Polarity::P) ? 0 : per_net;
    int prev = (site.polarity == Polarity::P) ? net.supply_p : net.supply_g;
    std::vector<int>& chain = net.tsv_edges[static_cast<int>(i)];
    for (int t = 0; t < nt; ++t) {
      int tap = off + (t * ny + gy) * nx + gx;
      chain.push_back(static_cast<int>(net.edges.size()));
      net.edges.push_back(Edge{prev, tap, seg_g});
      prev = tap;
    }
  }

  // Subarray attachment. The activation current is drawn across the full
  // top-tier rail row of the subarray; droop is reported at the mid-width
  // node pair.
  const int top = nt - 1;
  const int gx_mid = snap_index(w / 2.0, dx, nx);
  for (size_t s = 0; s < layout.subarray_centers.size(); ++s) {
    int sa = static_cast<int>(s) + 1;
    double sy = layout.subarray_centers[s].second;
    int gy = snap_index(sy, dy, ny);
    int p_node = (top * ny + gy) * nx + gx_mid;
    int g_node = per_net + (top * ny + gy) * nx + gx_mid;
    net.load_points[sa] = {p_node, g_node};
    std::vector<LoadContact>& cp = net.load_contacts_p[sa];
    std::vector<LoadContact>& cg = net.load_contacts_g[sa];
    double wgt = 1.0 / nx;
    for (int gx = 0; gx < nx; ++gx) {
      cp.push_back(LoadContact{(top * ny + gy) * nx + gx, wgt});
      cg.push_back(LoadContact{per_net + (top * ny + gy) * nx + gx, wgt});
    }
  }

  check_connected(net);
  return net;
}

ResistorNetwork apply_tsv_resistance(const ResistorNetwork& network,
                                     double per_tsv_extra_ohm) {
  if (per_tsv_extra_ohm < 0.0) {
    fail("negative-delta", "per-TSV extra resistance must be >= 0");
  }
  ResistorNetwork out = network;
  out.chain_extra_ohm = per_tsv_extra_ohm;
  double total = network.chain_base_ohm + per_tsv_extra_ohm;
  for (const auto& [tsv, edge_ids] : out.tsv_edges) {
    double seg_g = static_cast<double>(edge_ids.size()) / total;
    for (int e : edge_ids) out.edges[e].conductance = seg_g;
  }
  return out;
}

std::string netlist_text(const ResistorNetwork& network) {
  std::string out;
  out.reserve(network.edges.size() * 24);
  for (size_t i = 0; i < network.edges.size(); ++i) {
    const Edge& e = network.edges[i];
    out += textio::fmt("R%zu %d %d %.6g\n", i, e.a, e.b, 1.0 / e.conductance);
  }
  return out;
}

}  // namespace pdnsim

#include "pdnsim/irdrop.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <set>

#include "pdnsim/error.hpp"
#include "pdnsim/solver.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

namespace {

double droop_mv_at_pair(const ResistorNetwork& net, const SolveResult& r,
                        int p_node, int g_node) {
  return ((net.supply_voltage_v - r.voltages[p_node]) + r.voltages[g_node]) * 1000.0;
}

}  // namespace

PlacementPolicy default_policy(Design design) {
  return design == Design::clustered ? PlacementPolicy::adversarial_greedy
                                     : PlacementPolicy::uniform_per_section;
}

struct DroopEngine::Impl {
  PdnLayout layout;
  ResistorNetwork net;
  bool grid_mode = false;
  std::vector<int> sa_ids;

  struct PerNet {
    Polarity pol = Polarity::P;
    std::vector<int> local;
    std::vector<int> ids;
    Eigen::SparseMatrix<double> a0;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    // TSV chain edges in local indices; -1 marks the eliminated supply end.
    std::vector<std::pair<int, int>> chain;
    double r_chain = 0.0;  // present total per-TSV series resistance
    double g_seg = 0.0;    // present per-segment conductance
    int segs = 0;
    std::vector<int> top_local;  // grid cell -> local index
    Eigen::MatrixXd basis_top;   // cells x sa
    Eigen::MatrixXd q;           // chain x sa
    Eigen::VectorXd self_droop;  // per sa, at its measurement node
    bool y_ready = false;
    Eigen::MatrixXd y_top;  // cells x chain
    Eigen::MatrixXd k;      // chain x chain
  };
  PerNet pnet, gnet;

  Impl(const PdnLayout& l, const ResistorNetwork& n) : layout(l), net(n) {
    for (const auto& [sa, lp] : net.load_points) {
      (void)lp;
      sa_ids.push_back(sa);
    }
    grid_mode = net.grid_nx > 0 && net.grid_ny > 0 && net.tiers > 0;
    if (grid_mode) {
      setup_net(pnet, Polarity::P);
      setup_net(gnet, Polarity::G);
    }
  }

  int sa_col(int sa) const {
    auto it = std::lower_bound(sa_ids.begin(), sa_ids.end(), sa);
    if (it == sa_ids.end() || *it != sa) {
      fail("invalid-params", textio::fmt("subarray %d has no load point", sa));
    }
    return static_cast<int>(it - sa_ids.begin());
  }

  void setup_net(PerNet& s, Polarity pol) {
    s.pol = pol;
    int supply = (pol == Polarity::P) ? net.supply_p : net.supply_g;
    s.local.assign(net.nodes.size(), -1);
    for (const Node& node : net.nodes) {
      if (node.net == pol && node.id != supply) {
        s.local[node.id] = static_cast<int>(s.ids.size());
        s.ids.push_back(node.id);
      }
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(net.edges.size() * 2);
    for (const Edge& e : net.edges) {
      if (net.nodes[e.a].net != pol) continue;
      int la = s.local[e.a];
      int lb = s.local[e.b];
      if (la >= 0) trips.emplace_back(la, la, e.conductance);
      if (lb >= 0) trips.emplace_back(lb, lb, e.conductance);
      if (la >= 0 && lb >= 0) {
        trips.emplace_back(la, lb, -e.conductance);
        trips.emplace_back(lb, la, -e.conductance);
      }
    }
    int n = static_cast<int>(s.ids.size());
    s.a0.resize(n, n);
    s.a0.setFromTriplets(trips.begin(), trips.end());
    s.llt.compute(s.a0);
    if (s.llt.info() != Eigen::Success) {
      fail("singular-system", "net nodal matrix is not SPD");
    }

    s.r_chain = net.chain_base_ohm + net.chain_extra_ohm;
    for (const auto& [tsv, edge_ids] : net.tsv_edges) {
      (void)tsv;
      if (edge_ids.empty()) continue;
      if (net.nodes[net.edges[edge_ids.front()].a].net != pol &&
          net.nodes[net.edges[edge_ids.front()].b].net != pol) {
        continue;
      }
      s.segs = static_cast<int>(edge_ids.size());
      for (int e : edge_ids) {
        s.chain.emplace_back(s.local[net.edges[e].a], s.local[net.edges[e].b]);
        s.g_seg = net.edges[e].conductance;
      }
    }

    const int top = net.tiers - 1;
    s.top_local.resize(net.grid_nx * net.grid_ny);
    for (int gy = 0; gy < net.grid_ny; ++gy) {
      for (int gx = 0; gx < net.grid_nx; ++gx) {
        int id = (pol == Polarity::P) ? net.p_grid_node(top, gx, gy)
                                      : net.g_grid_node(top, gx, gy);
        s.top_local[gy * net.grid_nx + gx] = s.local[id];
      }
    }

    // Per-subarray unit-current basis solves, batched on one factorization.
    const int n_sa = static_cast<int>(sa_ids.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n_sa);
    const auto& contacts = (pol == Polarity::P) ? net.load_contacts_p : net.load_contacts_g;
    for (int c = 0; c < n_sa; ++c) {
      int sa = sa_ids[c];
      auto it = contacts.find(sa);
      if (it != contacts.end() && !it->second.empty()) {
        for (const LoadContact& lc : it->second) b(s.local[lc.node], c) += lc.weight;
      } else {
        auto lp = net.load_points.at(sa);
        int node = (pol == Polarity::P) ? lp.first : lp.second;
        b(s.local[node], c) += 1.0;
      }
    }
    Eigen::MatrixXd u = s.llt.solve(b);

    const int cells = net.grid_nx * net.grid_ny;
    s.basis_top.resize(cells, n_sa);
    for (int cell = 0; cell < cells; ++cell) {
      s.basis_top.row(cell) = u.row(s.top_local[cell]);
    }
    const int m = static_cast<int>(s.chain.size());
    s.q.resize(m, n_sa);
    for (int e = 0; e < m; ++e) {
      auto [la, lb] = s.chain[e];
      for (int c = 0; c < n_sa; ++c) {
        double va = la >= 0 ? u(la, c) : 0.0;
        double vb = lb >= 0 ? u(lb, c) : 0.0;
        s.q(e, c) = va - vb;
      }
    }
    s.self_droop.resize(n_sa);
    for (int c = 0; c < n_sa; ++c) {
      auto lp = net.load_points.at(sa_ids[c]);
      int node = (pol == Polarity::P) ? lp.first : lp.second;
      s.self_droop[c] = u(s.local[node], c);
    }
  }

  void ensure_y(PerNet& s) {
    if (s.y_ready) return;
    const int n = static_cast<int>(s.ids.size());
    const int m = static_cast<int>(s.chain.size());
    const int cells = net.grid_nx * net.grid_ny;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m);
    for (int e = 0; e < m; ++e) {
      auto [la, lb] = s.chain[e];
      if (la >= 0) c(la, e) += 1.0;
      if (lb >= 0) c(lb, e) -= 1.0;
    }
    Eigen::MatrixXd y = s.llt.solve(c);
    s.y_top.resize(cells, m);
    for (int cell = 0; cell < cells; ++cell) {
      s.y_top.row(cell) = y.row(s.top_local[cell]);
    }
    s.k.resize(m, m);
    for (int e = 0; e < m; ++e) {
      auto [la, lb] = s.chain[e];
      Eigen::VectorXd proj = Eigen::VectorXd::Zero(m);
      for (int col = 0; col < m; ++col) {
        double va = la >= 0 ? y(la, col) : 0.0;
        double vb = lb >= 0 ? y(lb, col) : 0.0;
        proj[col] = va - vb;
      }
      s.k.row(e) = proj;
    }
    s.y_ready = true;
  }

  Eigen::VectorXd weights(const LoadSet& loads) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(sa_ids.size());
    for (const auto& [sa, current] : loads.entries) {
      if (current < 0.0) fail("invalid-params", "load currents must be >= 0");
      w[sa_col(sa)] += current;
    }
    return w;
  }

  // Top-tier droop per grid cell (volts) for one net under the given loads
  // with extra uniform per-TSV resistance on top of the network state.
  Eigen::VectorXd net_cells(PerNet& s, const Eigen::VectorXd& w, double extra) {
    Eigen::VectorXd v = s.basis_top * w;
    if (extra > 1e-15) {
      ensure_y(s);
      double g_new = s.segs / (s.r_chain + extra);
      double dg = g_new - s.g_seg;
      const int m = static_cast<int>(s.chain.size());
      Eigen::MatrixXd mmat = s.k;
      for (int i = 0; i < m; ++i) mmat(i, i) += 1.0 / dg;
      Eigen::VectorXd z = mmat.partialPivLu().solve(s.q * w);
      v -= s.y_top * z;
    }
    return v;
  }

  Eigen::VectorXd cells_mv(const LoadSet& loads, double extra) {
    Eigen::VectorXd w = weights(loads);
    Eigen::VectorXd total = net_cells(pnet, w, extra) + net_cells(gnet, w, extra);
    return total * 1000.0;
  }

  double generic_max_droop_mv(const LoadSet& loads, double extra) {
    const ResistorNetwork* use = &net;
    ResistorNetwork aged;
    if (extra > 0.0) {
      aged = apply_tsv_resistance(net, net.chain_extra_ohm + extra);
      use = &aged;
    }
    SolveResult r = solve_node_voltages(*use, loads);
    double worst = 0.0;
    for (const auto& [sa, lp] : use->load_points) {
      (void)sa;
      worst = std::max(worst, droop_mv_at_pair(*use, r, lp.first, lp.second));
    }
    return worst;
  }

  double max_droop_mv(const LoadSet& loads, double extra) {
    if (extra < 0.0) fail("negative-delta", "extra resistance must be >= 0");
    if (!grid_mode) return generic_max_droop_mv(loads, extra);
    return cells_mv(loads, extra).maxCoeff();
  }

  IrDropMap map(const LoadSet& loads, double extra) {
    if (!grid_mode) fail("invalid-params", "IR-drop map requires a rail-grid network");
    Eigen::VectorXd mv = cells_mv(loads, extra);
    IrDropMap out;
    out.design = net.design;
    out.n_saa = static_cast<int>(loads.entries.size());
    out.placement = loads;
    out.nx = net.grid_nx;
    out.ny = net.grid_ny;
    out.grid_mv.assign(mv.data(), mv.data() + mv.size());
    out.max_droop_mv = 0.0;
    out.argmax_x = 0;
    out.argmax_y = 0;
    for (int gy = 0; gy < out.ny; ++gy) {
      for (int gx = 0; gx < out.nx; ++gx) {
        double v = out.at(gx, gy);
        if (v > out.max_droop_mv) {
          out.max_droop_mv = v;
          out.argmax_x = gx;
          out.argmax_y = gy;
        }
      }
    }
    return out;
  }

  double eff_resistance(int sa) {
    if (!grid_mode) return pdnsim::effective_resistance(net, sa);
    int c = sa_col(sa);
    return pnet.self_droop[c] + gnet.self_droop[c];
  }

  LoadSet place(int n, PlacementPolicy policy) {
    const int n_sa = static_cast<int>(sa_ids.size());
    if (n < 1 || n > n_sa) {
      fail("invalid-n", textio::fmt("n must be in 1..%d, got %d", n_sa, n));
    }
    double current = net.load_current_a;
    LoadSet out;
    if (policy == PlacementPolicy::adversarial_greedy) {
      std::set<int> chosen;
      for (int step = 0; step < n; ++step) {
        int best = -1;
        double best_droop = -1.0;
        for (int sa : sa_ids) {
          if (chosen.count(sa)) continue;
          LoadSet trial = out;
          trial.entries[sa] = current;
          double d = max_droop_mv(trial, 0.0);
          if (d > best_droop) {
            best_droop = d;
            best = sa;
          }
        }
        chosen.insert(best);
        out.entries[best] = current;
      }
      return out;
    }

    // uniform_per_section: spread counts evenly, low sections first, then pick
    // the subarrays farthest from each section's P line.
    const int n_sections = static_cast<int>(layout.sections.size());
    if (n_sections == 0) fail("invalid-params", "layout has no sections");
    std::vector<int> counts(n_sections, n / n_sections);
    for (int s = 0; s < n % n_sections; ++s) counts[s] += 1;
    for (int s = 0; s < n_sections; ++s) {
      const Section& sec = layout.sections[s];
      if (counts[s] > static_cast<int>(sec.subarray_ids.size())) {
        fail("invalid-n", textio::fmt("section %d cannot host %d activations", s, counts[s]));
      }
      std::vector<int> order = sec.subarray_ids;
      auto p_line_distance = [&](int sa) {
        double y = layout.subarray_centers[sa - 1].second;
        if (layout.design == Design::distributed) return sec.y_max_um - y;
        return std::min(y - sec.y_min_um, sec.y_max_um - y);
      };
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        double da = p_line_distance(a), db = p_line_distance(b);
        if (da != db) return da > db;
        return a < b;
      });
      for (int i = 0; i < counts[s]; ++i) out.entries[order[i]] = current;
    }
    return out;
  }

  int napsaa(double margin_mv, PlacementPolicy policy, double extra) {
    const int n_sa = static_cast<int>(sa_ids.size());
    for (int level : {32, 16, 8, 4, 2, 1}) {
      if (level > n_sa) continue;
      LoadSet pl = place(level, policy);
      if (max_droop_mv(pl, extra) <= margin_mv) return level;
    }
    return 0;
  }

  double headroom(int n, double margin_mv, PlacementPolicy policy) {
    LoadSet pl = place(n, policy);
    if (max_droop_mv(pl, 0.0) > margin_mv) {
      fail("unachievable-level",
           textio::fmt("%d activations violate %.2f mV at zero extra resistance", n, margin_mv));
    }
    double lo = 0.0, hi = 100.0;
    if (max_droop_mv(pl, hi) <= margin_mv) return hi;
    while (hi - lo > 1e-4) {
      double mid = 0.5 * (lo + hi);
      if (max_droop_mv(pl, mid) <= margin_mv) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }
};

DroopEngine::DroopEngine(const PdnLayout& layout, const ResistorNetwork& network)
    : impl_(std::make_unique<Impl>(layout, network)) {}
DroopEngine::~DroopEngine() = default;
DroopEngine::DroopEngine(DroopEngine&&) noexcept = default;
DroopEngine& DroopEngine::operator=(DroopEngine&&) noexcept = default;

const PdnLayout& DroopEngine::layout() const { return impl_->layout; }
const ResistorNetwork& DroopEngine::network() const { return impl_->net; }

double DroopEngine::max_droop_mv(const LoadSet& loads, double extra_ohm) {
  return impl_->max_droop_mv(loads, extra_ohm);
}

IrDropMap DroopEngine::irdrop_map(const LoadSet& loads, double extra_ohm) {
  return impl_->map(loads, extra_ohm);
}

double DroopEngine::effective_resistance_ohm(int subarray_id) {
  return impl_->eff_resistance(subarray_id);
}

int DroopEngine::worst_subarray() {
  int best = -1;
  double best_r = -1.0;
  for (int sa : impl_->sa_ids) {
    double r = impl_->eff_resistance(sa);
    if (r > best_r) {
      best_r = r;
      best = sa;
    }
  }
  return best;
}

LoadSet DroopEngine::place(int n, PlacementPolicy policy) {
  return impl_->place(n, policy);
}

int DroopEngine::napsaa(double margin_mv, PlacementPolicy policy, double extra_ohm) {
  return impl_->napsaa(margin_mv, policy, extra_ohm);
}

double DroopEngine::headroom(int n, double margin_mv, PlacementPolicy policy) {
  return impl_->headroom(n, margin_mv, policy);
}

IrDropMap compute_irdrop_map(const ResistorNetwork& network, const LoadSet& loads) {
  if (network.grid_nx <= 0) fail("invalid-params", "IR-drop map requires a rail-grid network");
  SolveResult r = solve_node_voltages(network, loads);
  IrDropMap out;
  out.design = network.design;
  out.n_saa = static_cast<int>(loads.entries.size());
  out.placement = loads;
  out.nx = network.grid_nx;
  out.ny = network.grid_ny;
  out.grid_mv.resize(out.nx * out.ny);
  const int top = network.tiers - 1;
  for (int gy = 0; gy < out.ny; ++gy) {
    for (int gx = 0; gx < out.nx; ++gx) {
      out.grid_mv[gy * out.nx + gx] = droop_mv_at_pair(
          network, r, network.p_grid_node(top, gx, gy), network.g_grid_node(top, gx, gy));
    }
  }
  out.max_droop_mv = 0.0;
  out.argmax_x = 0;
  out.argmax_y = 0;
  for (int gy = 0; gy < out.ny; ++gy) {
    for (int gx = 0; gx < out.nx; ++gx) {
      double v = out.at(gx, gy);
      if (v > out.max_droop_mv) {
        out.max_droop_mv = v;
        out.argmax_x = gx;
        out.argmax_y = gy;
      }
    }
  }
  return out;
}

LoadSet place_saas(const PdnLayout& layout, const ResistorNetwork& network, int n,
                   PlacementPolicy policy) {
  DroopEngine engine(layout, network);
  return engine.place(n, policy);
}

int find_napsaa(const PdnLayout& layout, const ResistorNetwork& network,
                double margin_mv, PlacementPolicy policy) {
  if (!(margin_mv > 0.0)) fail("invalid-params", "margin must be > 0");
  DroopEngine engine(layout, network);
  return engine.napsaa(margin_mv, policy, 0.0);
}

double resistance_headroom(const PdnLayout& layout, const ResistorNetwork& network,
                           int n, double margin_mv) {
  DroopEngine engine(layout, network);
  return engine.headroom(n, margin_mv, default_policy(layout.design));
}

std::string irdrop_map_csv(const IrDropMap& map) {
  std::string out = textio::fmt("# design=%s,n_saa=%d,max_droop_mv=%.2f\n",
                                design_name(map.design).c_str(), map.n_saa,
                                map.max_droop_mv);
  for (int gy = 0; gy < map.ny; ++gy) {
    for (int gx = 0; gx < map.nx; ++gx) {
      out += textio::fmt(gx + 1 < map.nx ? "%.2f," : "%.2f\n", map.at(gx, gy));
    }
  }
  return out;
}

IrDropMap parse_irdrop_map_csv(const std::string& text) {
  auto lines = textio::split_lines(text);
  if (lines.empty() || lines[0].rfind("# ", 0) != 0) {
    fail("invalid-params", "IR-drop map: missing header");
  }
  IrDropMap map;
  for (const std::string& field : textio::split(lines[0].substr(2), ',')) {
    auto kv = textio::split(field, '=');
    if (kv.size() != 2) fail("invalid-params", "IR-drop map: bad header field");
    if (kv[0] == "design") {
      map.design = design_from_name(kv[1]);
    } else if (kv[0] == "n_saa") {
      long n = 0;
      if (!textio::parse_int(kv[1], n)) fail("invalid-params", "IR-drop map: bad n_saa");
      map.n_saa = static_cast<int>(n);
    } else if (kv[0] == "max_droop_mv") {
      if (!textio::parse_double(kv[1], map.max_droop_mv)) {
        fail("invalid-params", "IR-drop map: bad max_droop_mv");
      }
    } else {
      fail("invalid-params", "IR-drop map: unknown header field " + kv[0]);
    }
  }
  map.ny = static_cast<int>(lines.size()) - 1;
  for (int gy = 0; gy < map.ny; ++gy) {
    auto cols = textio::split(lines[gy + 1], ',');
    if (map.nx == 0) map.nx = static_cast<int>(cols.size());
    if (static_cast<int>(cols.size()) != map.nx) {
      fail("invalid-params", "IR-drop map: ragged rows");
    }
    for (const std::string& cell : cols) {
      double v = 0.0;
      if (!textio::parse_double(cell, v)) fail("invalid-params", "IR-drop map: bad cell");
      map.grid_mv.push_back(v);
    }
  }
  return map;
}

}  // namespace pdnsim

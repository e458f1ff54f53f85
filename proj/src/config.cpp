#include "pdnsim/config.hpp"

#include <filesystem>
#include <functional>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace fs = std::filesystem;

namespace pdnsim {

std::vector<Design> RunConfig::designs() const {
  switch (scope) {
    case DesignScope::clustered_only: return {Design::clustered};
    case DesignScope::distributed_only: return {Design::distributed};
    default: return {Design::clustered, Design::distributed};
  }
}

PdnParams canonical_pdn_params(Design d) {
  PdnParams p;
  if (d == Design::clustered) {
    p.tsv_pitch_um = 21.0;
    p.vertical_rail_pitch_um = 7.0;
    p.tsvs_per_line = 32;
    p.sheet_resistance_ohm_sq = 0.05;
    p.tsv_c4_resistance_ohm = 0.25;
  } else {
    p.tsv_pitch_um = 96.0;
    p.vertical_rail_pitch_um = 8.0;
    p.tsvs_per_line = 8;
    p.sheet_resistance_ohm_sq = 0.007;
    p.tsv_c4_resistance_ohm = 0.21;
  }
  return p;
}

VoidResistanceModel canonical_void_model(Design d) {
  double r0 = canonical_pdn_params(d).tsv_c4_resistance_ohm;
  VoidResistanceModel m;
  m.kind = VoidModelKind::calibration_table;
  m.table = {{0.0, r0}, {5e-6, r0 + 130.0}};
  return m;
}

double canonical_em_dt_s() { return 2.5e5; }

RunConfig default_run_config() {
  RunConfig c;
  c.pdn_clustered = canonical_pdn_params(Design::clustered);
  c.pdn_distributed = canonical_pdn_params(Design::distributed);
  c.em.dt = canonical_em_dt_s();
  c.void_clustered = canonical_void_model(Design::clustered);
  c.void_distributed = canonical_void_model(Design::distributed);
  return c;
}

namespace {

[[noreturn]] void bad_type(size_t lineno, const std::string& key, const char* want) {
  fail("type-mismatch", textio::fmt("line %zu: key %s expects %s", lineno, key.c_str(), want));
}

double want_double(size_t lineno, const std::string& key, const std::string& value) {
  double v = 0.0;
  if (!textio::parse_double(value, v)) bad_type(lineno, key, "a number");
  return v;
}

int want_int(size_t lineno, const std::string& key, const std::string& value) {
  long v = 0;
  if (!textio::parse_int(value, v)) bad_type(lineno, key, "an integer");
  return static_cast<int>(v);
}

bool want_bool(size_t lineno, const std::string& key, const std::string& value) {
  bool v = false;
  if (!textio::parse_bool(value, v)) bad_type(lineno, key, "a boolean");
  return v;
}

// Applies one bare PDN field (key without the pdn. prefix) to params.
bool apply_pdn_field(PdnParams& p, const std::string& field, const std::string& value,
                     size_t lineno, const std::string& key) {
  if (field == "tsv_diameter") {
    p.tsv_diameter_um = want_double(lineno, key, value);
  } else if (field == "tsv_pitch") {
    p.tsv_pitch_um = want_double(lineno, key, value);
  } else if (field == "rail_width") {
    p.rail_width_um = want_double(lineno, key, value);
  } else if (field == "vertical_rail_pitch") {
    p.vertical_rail_pitch_um = want_double(lineno, key, value);
  } else if (field == "vertical_rails") {
    p.vertical_rails = want_int(lineno, key, value);
  } else if (field == "horizontal_rails") {
    p.horizontal_rails = want_int(lineno, key, value);
  } else if (field == "sheet_resistance") {
    p.sheet_resistance_ohm_sq = want_double(lineno, key, value);
  } else if (field == "tsv_c4_resistance") {
    p.tsv_c4_resistance_ohm = want_double(lineno, key, value);
  } else if (field == "tsv_c4_per_tier") {
    p.tsv_c4_per_tier = want_bool(lineno, key, value);
  } else if (field == "supply_voltage") {
    p.supply_voltage_v = want_double(lineno, key, value);
  } else if (field == "ir_margin") {
    p.ir_margin_mv = want_double(lineno, key, value);
  } else if (field == "current_per_saa") {
    p.current_per_saa_ma = want_double(lineno, key, value);
  } else if (field == "tsvs_per_line") {
    p.tsvs_per_line = want_int(lineno, key, value);
  } else {
    return false;
  }
  return true;
}

bool apply_em_field(EmParams& p, const std::string& field, const std::string& value,
                    size_t lineno, const std::string& key) {
  double* slot = nullptr;
  if (field == "alpha") slot = &p.alpha;
  else if (field == "f") slot = &p.f;
  else if (field == "omega") slot = &p.omega;
  else if (field == "delta") slot = &p.delta;
  else if (field == "d0") slot = &p.d0;
  else if (field == "ea") slot = &p.ea;
  else if (field == "k") slot = &p.k;
  else if (field == "temperature") slot = &p.temperature;
  else if (field == "z_star") slot = &p.z_star;
  else if (field == "e_charge") slot = &p.e_charge;
  else if (field == "rho_barrier") slot = &p.rho_barrier;
  else if (field == "eps_tsv") slot = &p.eps_tsv;
  else if (field == "c0") slot = &p.c0;
  else if (field == "dt") slot = &p.dt;
  else if (field == "j_unit") slot = &p.j_unit;
  else if (field == "tsv_radius") slot = &p.tsv_radius;
  else return false;
  *slot = want_double(lineno, key, value);
  return true;
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

void apply_workload_line(RunConfig& c, const std::string& value,
                         const std::string& base_dir, size_t lineno) {
  std::string path = resolve_path(value, base_dir);
  if (!fs::exists(path)) {
    fail("missing-workload-file", textio::fmt("line %zu: %s", lineno, path.c_str()));
  }
  c.workload_paths.push_back(path);
  c.workloads.push_back(parse_workload_file(path));
}

void apply_void_table_line(RunConfig& c, Design d, const std::string& value,
                           const std::string& base_dir, size_t lineno) {
  std::string path = resolve_path(value, base_dir);
  if (!fs::exists(path)) {
    fail("missing-workload-file", textio::fmt("line %zu: %s", lineno, path.c_str()));
  }
  VoidResistanceModel model = parse_void_table_csv(textio::read_file(path));
  if (d == Design::clustered) {
    c.void_clustered = model;
    c.void_table_path_clustered = path;
  } else {
    c.void_distributed = model;
    c.void_table_path_distributed = path;
  }
}

void apply_line(RunConfig& c, const std::string& key, const std::string& value,
                const std::string& base_dir, size_t lineno) {
  if (key == "design") {
    if (value == "clustered") c.scope = DesignScope::clustered_only;
    else if (value == "distributed") c.scope = DesignScope::distributed_only;
    else if (value == "both") c.scope = DesignScope::both;
    else bad_type(lineno, key, "clustered, distributed, or both");
    return;
  }
  if (key == "margin_mv") {
    double v = want_double(lineno, key, value);
    if (!(v > 0.0)) bad_type(lineno, key, "a positive number");
    c.margin_mv = v;
    c.pdn_clustered.ir_margin_mv = v;
    c.pdn_distributed.ir_margin_mv = v;
    return;
  }
  if (key == "horizon_years") {
    double v = want_double(lineno, key, value);
    if (!(v > 0.0)) bad_type(lineno, key, "a positive number");
    c.horizon_years = v;
    return;
  }
  if (key == "out_dir") {
    c.out_dir = resolve_path(value, base_dir);
    return;
  }
  if (key == "seed") {
    long v = 0;
    if (!textio::parse_int(value, v)) bad_type(lineno, key, "an integer");
    c.seed = v;
    return;
  }
  if (key == "workload") {
    apply_workload_line(c, value, base_dir, lineno);
    return;
  }
  if (key == "em.void_model") {
    VoidModelKind kind;
    if (value == "analytic") kind = VoidModelKind::analytic_blockage;
    else if (value == "table") kind = VoidModelKind::calibration_table;
    else bad_type(lineno, key, "analytic or table");
    c.void_clustered.kind = kind;
    c.void_distributed.kind = kind;
    return;
  }
  if (key == "em.clustered.void_table") {
    apply_void_table_line(c, Design::clustered, value, base_dir, lineno);
    return;
  }
  if (key == "em.distributed.void_table") {
    apply_void_table_line(c, Design::distributed, value, base_dir, lineno);
    return;
  }
  if (key.rfind("em.", 0) == 0) {
    if (!apply_em_field(c.em, key.substr(3), value, lineno, key)) {
      fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    }
    return;
  }
  if (key.rfind("timing.", 0) == 0) {
    std::string field = key.substr(7);
    double v = want_double(lineno, key, value);
    if (!(v > 0.0)) bad_type(lineno, key, "a positive number");
    if (field == "t_rc") c.timing.t_rc_ns = v;
    else if (field == "t_rcd") c.timing.t_rcd_ns = v;
    else if (field == "t_cl") c.timing.t_cl_ns = v;
    else fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    return;
  }
  if (key.rfind("pdn.clustered.", 0) == 0) {
    if (!apply_pdn_field(c.pdn_clustered, key.substr(14), value, lineno, key)) {
      fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    }
    return;
  }
  if (key.rfind("pdn.distributed.", 0) == 0) {
    if (!apply_pdn_field(c.pdn_distributed, key.substr(16), value, lineno, key)) {
      fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    }
    return;
  }
  if (key.rfind("pdn.", 0) == 0) {
    std::string field = key.substr(4);
    bool ok_c = apply_pdn_field(c.pdn_clustered, field, value, lineno, key);
    bool ok_d = apply_pdn_field(c.pdn_distributed, field, value, lineno, key);
    if (!ok_c || !ok_d) {
      fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    }
    return;
  }
  fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
}

// Shared line scanner for config and workload files.
void scan_lines(const std::string& text,
                const std::function<void(const std::string&, const std::string&, size_t)>& on_kv) {
  auto lines = textio::split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = textio::trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail("type-mismatch", textio::fmt("line %zu: expected key = value", i + 1));
    }
    std::string key = textio::trim(line.substr(0, eq));
    std::string value = textio::trim(line.substr(eq + 1));
    if (key.empty()) {
      fail("type-mismatch", textio::fmt("line %zu: empty key", i + 1));
    }
    on_kv(key, value, i + 1);
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  RunConfig c = default_run_config();
  scan_lines(text, [&](const std::string& key, const std::string& value, size_t lineno) {
    apply_line(c, key, value, base_dir, lineno);
  });
  validate_params(c.pdn_clustered, c.stack);
  validate_params(c.pdn_distributed, c.stack);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  fs::path p(path);
  return parse_config(textio::read_file(path), p.parent_path().empty()
                                                   ? std::string(".")
                                                   : p.parent_path().string());
}

WorkloadProfile parse_workload_text(const std::string& text) {
  WorkloadProfile wl;
  wl.name.clear();
  scan_lines(text, [&](const std::string& key, const std::string& value, size_t lineno) {
    if (key == "name") {
      wl.name = value;
    } else if (key == "active_fraction") {
      wl.active_fraction = want_double(lineno, key, value);
    } else if (key == "demanded_parallelism") {
      wl.demanded_parallelism = want_int(lineno, key, value);
    } else if (key == "run_active_time") {
      wl.run_active_time_s = want_double(lineno, key, value);
    } else if (key == "request_rate") {
      wl.request_rate = want_double(lineno, key, value);
    } else if (key == "read_write_energy") {
      wl.read_write_energy_j = want_double(lineno, key, value);
    } else if (key == "static_power") {
      wl.static_power_w = want_double(lineno, key, value);
    } else if (key == "activation_energy") {
      wl.activation_energy_j = want_double(lineno, key, value);
    } else {
      fail("unknown-key", textio::fmt("line %zu: %s", lineno, key.c_str()));
    }
  });
  return wl;
}

WorkloadProfile parse_workload_file(const std::string& path) {
  WorkloadProfile wl = parse_workload_text(textio::read_file(path));
  if (wl.name.empty()) wl.name = fs::path(path).stem().string();
  validate_workload(wl);
  return wl;
}

std::string render_config(const RunConfig& c) {
  std::string out;
  const char* scope = c.scope == DesignScope::clustered_only ? "clustered"
                      : c.scope == DesignScope::distributed_only ? "distributed"
                                                                 : "both";
  out += textio::fmt("design = %s\n", scope);
  out += textio::fmt("margin_mv = %.17g\n", c.margin_mv);
  out += textio::fmt("horizon_years = %.17g\n", c.horizon_years);
  out += textio::fmt("out_dir = %s\n", c.out_dir.c_str());
  out += textio::fmt("seed = %ld\n", c.seed);
  out += textio::fmt("timing.t_rc = %.17g\n", c.timing.t_rc_ns);
  out += textio::fmt("timing.t_rcd = %.17g\n", c.timing.t_rcd_ns);
  out += textio::fmt("timing.t_cl = %.17g\n", c.timing.t_cl_ns);
  const EmParams& e = c.em;
  out += textio::fmt("em.alpha = %.17g\n", e.alpha);
  out += textio::fmt("em.f = %.17g\n", e.f);
  out += textio::fmt("em.omega = %.17g\n", e.omega);
  out += textio::fmt("em.delta = %.17g\n", e.delta);
  out += textio::fmt("em.d0 = %.17g\n", e.d0);
  out += textio::fmt("em.ea = %.17g\n", e.ea);
  out += textio::fmt("em.k = %.17g\n", e.k);
  out += textio::fmt("em.temperature = %.17g\n", e.temperature);
  out += textio::fmt("em.z_star = %.17g\n", e.z_star);
  out += textio::fmt("em.e_charge = %.17g\n", e.e_charge);
  out += textio::fmt("em.rho_barrier = %.17g\n", e.rho_barrier);
  out += textio::fmt("em.eps_tsv = %.17g\n", e.eps_tsv);
  out += textio::fmt("em.c0 = %.17g\n", e.c0);
  out += textio::fmt("em.dt = %.17g\n", e.dt);
  out += textio::fmt("em.j_unit = %.17g\n", e.j_unit);
  out += textio::fmt("em.tsv_radius = %.17g\n", e.tsv_radius);
  out += textio::fmt("em.void_model = %s\n",
                     c.void_clustered.kind == VoidModelKind::calibration_table
                         ? "table"
                         : "analytic");
  if (!c.void_table_path_clustered.empty()) {
    out += textio::fmt("em.clustered.void_table = %s\n", c.void_table_path_clustered.c_str());
  }
  if (!c.void_table_path_distributed.empty()) {
    out += textio::fmt("em.distributed.void_table = %s\n",
                       c.void_table_path_distributed.c_str());
  }
  for (Design d : {Design::clustered, Design::distributed}) {
    const PdnParams& p = c.pdn(d);
    const std::string prefix = "pdn." + design_name(d) + ".";
    out += textio::fmt("%stsv_diameter = %.17g\n", prefix.c_str(), p.tsv_diameter_um);
    out += textio::fmt("%stsv_pitch = %.17g\n", prefix.c_str(), p.tsv_pitch_um);
    out += textio::fmt("%srail_width = %.17g\n", prefix.c_str(), p.rail_width_um);
    out += textio::fmt("%svertical_rail_pitch = %.17g\n", prefix.c_str(),
                       p.vertical_rail_pitch_um);
    out += textio::fmt("%svertical_rails = %d\n", prefix.c_str(), p.vertical_rails);
    out += textio::fmt("%shorizontal_rails = %d\n", prefix.c_str(), p.horizontal_rails);
    out += textio::fmt("%ssheet_resistance = %.17g\n", prefix.c_str(),
                       p.sheet_resistance_ohm_sq);
    out += textio::fmt("%stsv_c4_resistance = %.17g\n", prefix.c_str(),
                       p.tsv_c4_resistance_ohm);
    out += textio::fmt("%stsv_c4_per_tier = %s\n", prefix.c_str(),
                       p.tsv_c4_per_tier ? "true" : "false");
    out += textio::fmt("%ssupply_voltage = %.17g\n", prefix.c_str(), p.supply_voltage_v);
    out += textio::fmt("%sir_margin = %.17g\n", prefix.c_str(), p.ir_margin_mv);
    out += textio::fmt("%scurrent_per_saa = %.17g\n", prefix.c_str(), p.current_per_saa_ma);
    out += textio::fmt("%stsvs_per_line = %d\n", prefix.c_str(), p.tsvs_per_line);
  }
  for (const std::string& path : c.workload_paths) {
    out += textio::fmt("workload = %s\n", path.c_str());
  }
  return out;
}

}  // namespace pdnsim

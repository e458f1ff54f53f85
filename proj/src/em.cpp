#include "pdnsim/em.hpp"

#include <cmath>
#include <limits>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(const EmParams& p) {
  const double values[] = {p.alpha, p.f,        p.omega,       p.delta,   p.d0,
                           p.ea,    p.k,        p.temperature, p.z_star,  p.e_charge,
                           p.rho_barrier, p.eps_tsv, p.c0,     p.dt,      p.j_unit,
                           p.tsv_radius};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) fail("invalid-params", "EM parameters must be positive and finite");
  }
}

}  // namespace

double vacancy_diffusivity(const EmParams& p) {
  check_params(p);
  return p.d0 * std::exp(-p.ea / (p.k * p.temperature));
}

double vacancy_concentration(const EmParams& p) {
  check_params(p);
  return p.c0 * std::exp(-p.ea / (p.k * p.temperature));
}

double current_density(int n_saa, const EmParams& p) {
  check_params(p);
  if (n_saa < 0) fail("invalid-params", "n_saa must be >= 0");
  switch (n_saa) {
    case 32: return 1.2e10;
    case 16: return 6.02e9;
    case 8: return 3.01e9;
    case 4: return 1.5e9;
    case 2: return 7.52e8;
    default: return p.j_unit * static_cast<double>(n_saa);
  }
}

double vacancy_flux(const EmParams& p, double j) {
  check_params(p);
  return vacancy_diffusivity(p) * vacancy_concentration(p) *
         (p.e_charge * p.z_star / (p.k * p.temperature)) * p.rho_barrier * j;
}

VoidState step_void_growth(const VoidState& s, const EmParams& p, double j,
                           double effective_dt) {
  check_params(p);
  if (effective_dt < 0.0) fail("invalid-params", "effective_dt must be >= 0");
  double dr = p.alpha * p.f * p.omega * p.eps_tsv * std::fabs(vacancy_flux(p, j)) *
              effective_dt / p.delta;
  VoidState out;
  out.radius_m = std::min(p.tsv_radius, s.radius_m + dr);
  out.elapsed_s = s.elapsed_s + effective_dt;
  return out;
}

double void_to_resistance(const VoidState& s, const EmParams& p,
                          const VoidResistanceModel& model, double r0_ohm) {
  if (!(r0_ohm > 0.0)) fail("invalid-params", "r0 must be > 0");
  if (s.radius_m < 0.0) fail("invalid-params", "void radius must be >= 0");
  if (s.radius_m >= p.tsv_radius) return kInf;
  if (model.kind == VoidModelKind::analytic_blockage) {
    double rr = p.tsv_radius * p.tsv_radius;
    return r0_ohm * rr / (rr - s.radius_m * s.radius_m);
  }
  const auto& t = model.table;
  if (t.size() < 2) fail("invalid-params", "calibration table needs >= 2 rows");
  double r = s.radius_m;
  if (r <= t.front().first) return t.front().second;
  if (r >= t.back().first) return t.back().second;
  for (size_t i = 1; i < t.size(); ++i) {
    if (r <= t[i].first) {
      double x0 = t[i - 1].first, y0 = t[i - 1].second;
      double x1 = t[i].first, y1 = t[i].second;
      return y0 + (y1 - y0) * (r - x0) / (x1 - x0);
    }
  }
  return t.back().second;
}

double resistance_to_radius(double resistance_ohm, const EmParams& p,
                            const VoidResistanceModel& model, double r0_ohm) {
  if (!(r0_ohm > 0.0)) fail("invalid-params", "r0 must be > 0");
  if (!std::isfinite(resistance_ohm)) return p.tsv_radius;
  if (model.kind == VoidModelKind::analytic_blockage) {
    if (resistance_ohm <= r0_ohm) return 0.0;
    double rr = p.tsv_radius * p.tsv_radius;
    return std::sqrt(rr * (1.0 - r0_ohm / resistance_ohm));
  }
  const auto& t = model.table;
  if (t.size() < 2) fail("invalid-params", "calibration table needs >= 2 rows");
  if (resistance_ohm <= t.front().second) return t.front().first;
  if (resistance_ohm >= t.back().second) return t.back().first;
  for (size_t i = 1; i < t.size(); ++i) {
    if (resistance_ohm <= t[i].second) {
      double x0 = t[i - 1].first, y0 = t[i - 1].second;
      double x1 = t[i].first, y1 = t[i].second;
      return x0 + (x1 - x0) * (resistance_ohm - y0) / (y1 - y0);
    }
  }
  return t.back().first;
}

VoidResistanceModel parse_void_table_csv(const std::string& text) {
  auto lines = textio::split_lines(text);
  if (lines.empty()) fail("invalid-params", "void table: empty file");
  if (textio::trim(lines[0]) != "radius_m,resistance_ohm") {
    fail("invalid-params", "void table: expected header radius_m,resistance_ohm");
  }
  VoidResistanceModel model;
  model.kind = VoidModelKind::calibration_table;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string line = textio::trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    auto cols = textio::split(line, ',');
    double radius = 0.0, resistance = 0.0;
    if (cols.size() != 2 || !textio::parse_double(cols[0], radius) ||
        !textio::parse_double(cols[1], resistance)) {
      fail("invalid-params", textio::fmt("void table: bad row at line %zu", i + 1));
    }
    model.table.emplace_back(radius, resistance);
  }
  if (model.table.size() < 2) fail("invalid-params", "void table: needs >= 2 rows");
  for (size_t i = 1; i < model.table.size(); ++i) {
    if (!(model.table[i].first > model.table[i - 1].first) ||
        !(model.table[i].second > model.table[i - 1].second)) {
      fail("invalid-params", "void table: rows must strictly increase in radius and resistance");
    }
  }
  return model;
}

}  // namespace pdnsim

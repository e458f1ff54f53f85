#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pdnsim {

struct EmParams {
  double alpha = 1.0;            // void growth proportionality factor
  double f = 0.4;                // fraction of flux feeding the void
  double omega = 1.18e-29;       // atomic volume, m^3
  double delta = 5e-9;           // void interface thickness, m
  double d0 = 0.0047;            // diffusivity prefactor, m^2/s
  double ea = 1.30e-19;          // activation energy, J
  double k = 1.38e-23;           // Boltzmann constant, J/K
  double temperature = 453.0;    // K
  double z_star = 1.0;           // effective charge number
  double e_charge = 1.602e-19;   // elementary charge, C
  double rho_barrier = 3.00e-6;  // barrier resistivity, ohm*m
  double eps_tsv = 1.15e-6;      // effective void radius scale, m
  double c0 = 1.53e28;           // atomic concentration prefactor, m^-3
  double dt = 5.0e6;             // aging step, s
  double j_unit = 3.76e8;        // current density per parallel SAA, A/m^2
  double tsv_radius = 5e-6;      // TSV cross-section radius, m
};

struct VoidState {
  double radius_m = 0.0;
  double elapsed_s = 0.0;
};

enum class VoidModelKind { analytic_blockage, calibration_table };

struct VoidResistanceModel {
  VoidModelKind kind = VoidModelKind::analytic_blockage;
  // (radius m, resistance ohm), strictly increasing in both columns.
  std::vector<std::pair<double, double>> table;
};

double vacancy_diffusivity(const EmParams& p);
double vacancy_concentration(const EmParams& p);

// Per-TSV current density at a given parallel-SAA level. Levels 2..32 use the
// characterized table; other levels fall back to j_unit * n.
double current_density(int n_saa, const EmParams& p);

double vacancy_flux(const EmParams& p, double j);

VoidState step_void_growth(const VoidState& s, const EmParams& p, double j,
                           double effective_dt);

// Maps the void radius to the TSV resistance. Returns +inf once the void
// spans the full cross-section (radius >= tsv_radius).
double void_to_resistance(const VoidState& s, const EmParams& p,
                          const VoidResistanceModel& model, double r0_ohm);

// Inverse of void_to_resistance on the growing branch; used for crossing
// interpolation. resistance must be >= the radius-0 value.
double resistance_to_radius(double resistance_ohm, const EmParams& p,
                            const VoidResistanceModel& model, double r0_ohm);

// Parses CSV text "radius_m,resistance_ohm" (header required, >= 2 rows,
// strictly increasing in both columns).
VoidResistanceModel parse_void_table_csv(const std::string& text);

}  // namespace pdnsim

#pragma once

// Brute-force reference evaluation of the electromigration scalar chain.
// Deliberately written as standalone longhand formulas (own parameter struct,
// no calls into the library) so it can cross-check pdnsim::em.

#include <cmath>
#include <cstdlib>

namespace emref {

struct Params {
  double alpha;
  double f;
  double omega;
  double delta;
  double d0;
  double ea;
  double k;
  double temperature;
  double z_star;
  double e_charge;
  double rho_barrier;
  double eps_tsv;
  double c0;
  double dt;
  double j_unit;
  double tsv_radius;
};

inline Params defaults() {
  Params q;
  q.alpha = 1.0;
  q.f = 0.4;
  q.omega = 1.18e-29;
  q.delta = 5e-9;
  q.d0 = 0.0047;
  q.ea = 1.30e-19;
  q.k = 1.38e-23;
  q.temperature = 453.0;
  q.z_star = 1.0;
  q.e_charge = 1.602e-19;
  q.rho_barrier = 3.00e-6;
  q.eps_tsv = 1.15e-6;
  q.c0 = 1.53e28;
  q.dt = 5.0e6;
  q.j_unit = 3.76e8;
  q.tsv_radius = 5e-6;
  return q;
}

inline double diffusivity(const Params& q) {
  double exponent = -(q.ea / (q.k * q.temperature));
  return q.d0 * std::exp(exponent);
}

inline double concentration(const Params& q) {
  double exponent = -(q.ea / (q.k * q.temperature));
  return q.c0 * std::exp(exponent);
}

inline double density(const Params& q, int n_saa) {
  if (n_saa == 32) return 1.2e10;
  if (n_saa == 16) return 6.02e9;
  if (n_saa == 8) return 3.01e9;
  if (n_saa == 4) return 1.5e9;
  if (n_saa == 2) return 7.52e8;
  return q.j_unit * static_cast<double>(n_saa);
}

inline double flux(const Params& q, double j) {
  double dv = q.d0 * std::exp(-(q.ea / (q.k * q.temperature)));
  double cv = q.c0 * std::exp(-(q.ea / (q.k * q.temperature)));
  double drift = (q.e_charge * q.z_star) / (q.k * q.temperature);
  return dv * cv * drift * q.rho_barrier * j;
}

inline double growth_delta(const Params& q, double j, double dt_eff) {
  double jv = flux(q, j);
  return q.alpha * q.f * q.omega * q.eps_tsv * std::fabs(jv) * dt_eff / q.delta;
}

}  // namespace emref

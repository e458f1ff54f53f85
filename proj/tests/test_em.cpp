#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "oracle_em.hpp"
#include "pdnsim/em.hpp"
#include "pdnsim/error.hpp"

using namespace pdnsim;

namespace {

emref::Params mirror(const EmParams& p) {
  emref::Params q;
  q.alpha = p.alpha;
  q.f = p.f;
  q.omega = p.omega;
  q.delta = p.delta;
  q.d0 = p.d0;
  q.ea = p.ea;
  q.k = p.k;
  q.temperature = p.temperature;
  q.z_star = p.z_star;
  q.e_charge = p.e_charge;
  q.rho_barrier = p.rho_barrier;
  q.eps_tsv = p.eps_tsv;
  q.c0 = p.c0;
  q.dt = p.dt;
  q.j_unit = p.j_unit;
  q.tsv_radius = p.tsv_radius;
  return q;
}

EmParams randomized(std::mt19937& rng) {
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  EmParams p;
  p.alpha *= scale(rng);
  p.f *= scale(rng);
  p.omega *= scale(rng);
  p.delta *= scale(rng);
  p.d0 *= scale(rng);
  p.ea *= scale(rng);
  p.temperature *= scale(rng);
  p.z_star *= scale(rng);
  p.rho_barrier *= scale(rng);
  p.eps_tsv *= scale(rng);
  p.c0 *= scale(rng);
  p.j_unit *= scale(rng);
  return p;
}

}  // namespace

TEST_CASE("diffusivity and concentration follow the arrhenius reference") {
  EmParams p;
  emref::Params q = emref::defaults();
  CHECK(vacancy_diffusivity(p) == doctest::Approx(emref::diffusivity(q)).epsilon(1e-12));
  CHECK(vacancy_concentration(p) ==
        doctest::Approx(emref::concentration(q)).epsilon(1e-12));
  // Magnitude anchors at the default operating point.
  CHECK(vacancy_diffusivity(p) == doctest::Approx(4.37e-12).epsilon(0.01));
  CHECK(vacancy_concentration(p) == doctest::Approx(1.42e19).epsilon(0.01));
}

TEST_CASE("vacancy flux matches the reference chain at full parallelism") {
  EmParams p;
  emref::Params q = emref::defaults();
  double j = current_density(32, p);
  CHECK(vacancy_flux(p, j) == doctest::Approx(emref::flux(q, j)).epsilon(1e-12));
  CHECK(vacancy_flux(p, j) == doctest::Approx(5.74e13).epsilon(0.01));
}

TEST_CASE("characterized current densities are reproduced verbatim") {
  EmParams p;
  CHECK(current_density(32, p) == 1.2e10);
  CHECK(current_density(16, p) == 6.02e9);
  CHECK(current_density(8, p) == 3.01e9);
  CHECK(current_density(4, p) == 1.5e9);
  CHECK(current_density(2, p) == 7.52e8);
}

TEST_CASE("uncharacterized levels scale the per-activation density") {
  EmParams p;
  CHECK(current_density(0, p) == 0.0);
  CHECK(current_density(1, p) == p.j_unit);
  CHECK(current_density(3, p) == 3.0 * p.j_unit);
  CHECK(current_density(5, p) == 5.0 * p.j_unit);
  CHECK_THROWS_WITH_AS(current_density(-1, p), doctest::Contains("invalid-params"),
                       Error);
}

TEST_CASE("one growth step matches the reference delta") {
  EmParams p;
  emref::Params q = emref::defaults();
  double j = current_density(32, p);
  VoidState s;
  VoidState next = step_void_growth(s, p, j, p.dt);
  CHECK(next.radius_m == doctest::Approx(emref::growth_delta(q, j, p.dt)).epsilon(1e-12));
  CHECK(next.radius_m == doctest::Approx(3.11e-7 * (p.dt / 5.0e6)).epsilon(0.01));
  CHECK(next.elapsed_s == p.dt);
}

TEST_CASE("randomized parameter sets agree with the reference everywhere") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> level(1, 40);
  std::uniform_real_distribution<double> dt_eff(0.0, 1e7);
  for (int trial = 0; trial < 100; ++trial) {
    EmParams p = randomized(rng);
    emref::Params q = mirror(p);
    int n = level(rng);
    double j = current_density(n, p);
    CHECK(j == emref::density(q, n));
    CHECK(vacancy_diffusivity(p) ==
          doctest::Approx(emref::diffusivity(q)).epsilon(1e-6));
    CHECK(vacancy_concentration(p) ==
          doctest::Approx(emref::concentration(q)).epsilon(1e-6));
    CHECK(vacancy_flux(p, j) == doctest::Approx(emref::flux(q, j)).epsilon(1e-6));
    double dt = dt_eff(rng);
    VoidState s;
    s.radius_m = p.tsv_radius * 0.01;
    VoidState next = step_void_growth(s, p, j, dt);
    double expect = std::min(p.tsv_radius, s.radius_m + emref::growth_delta(q, j, dt));
    CHECK(next.radius_m == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("growth from zero commutes with splitting the step in half") {
  EmParams p;
  double j = current_density(4, p);
  VoidState full = step_void_growth(VoidState{}, p, j, p.dt);
  VoidState half = step_void_growth(VoidState{}, p, j, p.dt / 2.0);
  VoidState both = step_void_growth(half, p, j, p.dt / 2.0);
  CHECK(both.radius_m == full.radius_m);
  CHECK(both.elapsed_s == full.elapsed_s);
}

TEST_CASE("growth caps at the tsv radius and zero dt is a no-op") {
  EmParams p;
  double j = current_density(32, p);
  VoidState s;
  s.radius_m = p.tsv_radius * 0.999999;
  VoidState capped = step_void_growth(s, p, j, 1e12);
  CHECK(capped.radius_m == p.tsv_radius);

  VoidState frozen = step_void_growth(s, p, j, 0.0);
  CHECK(frozen.radius_m == s.radius_m);
  CHECK_THROWS_WITH_AS(step_void_growth(s, p, j, -1.0),
                       doctest::Contains("invalid-params"), Error);
}

TEST_CASE("analytic blockage maps radius to resistance") {
  EmParams p;
  VoidResistanceModel analytic;
  const double r0 = 0.25;

  VoidState fresh;
  CHECK(void_to_resistance(fresh, p, analytic, r0) == r0);

  VoidState half_area;
  half_area.radius_m = p.tsv_radius / std::sqrt(2.0);
  CHECK(void_to_resistance(half_area, p, analytic, r0) ==
        doctest::Approx(2.0 * r0).epsilon(1e-12));

  VoidState spanned;
  spanned.radius_m = p.tsv_radius;
  CHECK(std::isinf(void_to_resistance(spanned, p, analytic, r0)));

  CHECK_THROWS_WITH_AS(void_to_resistance(fresh, p, analytic, 0.0),
                       doctest::Contains("invalid-params"), Error);
  VoidState negative;
  negative.radius_m = -1e-9;
  CHECK_THROWS_WITH_AS(void_to_resistance(negative, p, analytic, r0),
                       doctest::Contains("invalid-params"), Error);
}

TEST_CASE("calibration tables interpolate piecewise linearly and clamp") {
  EmParams p;
  VoidResistanceModel table;
  table.kind = VoidModelKind::calibration_table;
  table.table = {{0.0, 0.25}, {2.5e-6, 0.30}};
  const double r0 = 0.25;

  VoidState s;
  CHECK(void_to_resistance(s, p, table, r0) == 0.25);
  s.radius_m = 1.25e-6;
  CHECK(void_to_resistance(s, p, table, r0) == doctest::Approx(0.275).epsilon(1e-12));
  s.radius_m = 4.0e-6;
  CHECK(void_to_resistance(s, p, table, r0) == 0.30);
  s.radius_m = p.tsv_radius;
  CHECK(std::isinf(void_to_resistance(s, p, table, r0)));
}

TEST_CASE("resistance grows monotonically with the void radius") {
  EmParams p;
  VoidResistanceModel analytic;
  VoidResistanceModel table;
  table.kind = VoidModelKind::calibration_table;
  table.table = {{0.0, 0.25}, {1e-6, 0.5}, {3e-6, 4.0}, {5e-6, 130.0}};

  for (const VoidResistanceModel* model : {&analytic, &table}) {
    double prev = 0.0;
    for (double r = 0.0; r < p.tsv_radius; r += p.tsv_radius / 64.0) {
      VoidState s;
      s.radius_m = r;
      double resistance = void_to_resistance(s, p, *model, 0.25);
      CHECK(resistance >= prev);
      prev = resistance;
    }
  }
}

TEST_CASE("radius recovery inverts the resistance map") {
  EmParams p;
  VoidResistanceModel analytic;
  VoidResistanceModel table;
  table.kind = VoidModelKind::calibration_table;
  table.table = {{0.0, 0.25}, {1e-6, 0.5}, {3e-6, 4.0}, {5e-6, 130.0}};
  const double r0 = 0.25;

  for (const VoidResistanceModel* model : {&analytic, &table}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      VoidState s;
      s.radius_m = frac * p.tsv_radius * 0.99;
      double resistance = void_to_resistance(s, p, *model, r0);
      double back = resistance_to_radius(resistance, p, *model, r0);
      CHECK(back == doctest::Approx(s.radius_m).epsilon(1e-9));
    }
  }
  CHECK(resistance_to_radius(std::numeric_limits<double>::infinity(), p, analytic, r0) ==
        p.tsv_radius);
  CHECK(resistance_to_radius(r0 / 2.0, p, analytic, r0) == 0.0);
}

TEST_CASE("void table csv parsing enforces shape and monotonicity") {
  VoidResistanceModel ok = parse_void_table_csv(
      "radius_m,resistance_ohm\n0.0,0.25\n5e-6,130.25\n");
  CHECK(ok.kind == VoidModelKind::calibration_table);
  REQUIRE(ok.table.size() == 2);
  CHECK(ok.table[0] == std::pair<double, double>{0.0, 0.25});
  CHECK(ok.table[1] == std::pair<double, double>{5e-6, 130.25});

  CHECK_THROWS_WITH_AS(parse_void_table_csv("radius,resistance\n0,1\n1,2\n"),
                       doctest::Contains("invalid-params"), Error);
  CHECK_THROWS_WITH_AS(parse_void_table_csv("radius_m,resistance_ohm\n0.0,0.25\n"),
                       doctest::Contains("invalid-params"), Error);
  CHECK_THROWS_WITH_AS(
      parse_void_table_csv("radius_m,resistance_ohm\n0.0,0.25\n1e-6,0.2\n"),
      doctest::Contains("invalid-params"), Error);
  CHECK_THROWS_WITH_AS(
      parse_void_table_csv("radius_m,resistance_ohm\n0.0,0.25\nbad,0.3\n"),
      doctest::Contains("invalid-params"), Error);
}

TEST_CASE("non-positive physical parameters are rejected") {
  EmParams p;
  p.temperature = 0.0;
  CHECK_THROWS_WITH_AS(vacancy_diffusivity(p), doctest::Contains("invalid-params"),
                       Error);
  EmParams q;
  q.delta = -1e-9;
  CHECK_THROWS_WITH_AS(vacancy_flux(q, 1e9), doctest::Contains("invalid-params"), Error);
  EmParams nan_p;
  nan_p.alpha = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(current_density(4, nan_p), doctest::Contains("invalid-params"),
                       Error);
}

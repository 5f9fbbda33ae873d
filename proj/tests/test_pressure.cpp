#include <cmath>

#include "doctest.h"
#include "ratelab/pressure.hpp"
#include "ratelab/rng.hpp"

using namespace ratelab;

namespace {
const double kLog2 = std::log(2.0);
}

TEST_CASE("power-map periodic pressure matches the closed form") {
  OrbitSet orbit = periodic_points(MapSpec::power(2), 12);
  OrbitDerivCache cache = cache_log_derivs(orbit);
  for (double t : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    double est = pressure_estimate_kt(cache, t);
    // Finite-n value: (1-t) log 2 + (1/12) log(1 - 2^-12), exactly.
    double exact = (1.0 - t) * kLog2 + std::log(1.0 - std::pow(2.0, -12)) / 12.0;
    CHECK(est == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(est - (1.0 - t) * kLog2) <= 1e-4);
  }
  CHECK(std::abs(pressure_estimate_kt(cache, 1.0)) <= 1e-4);  // P(1) = 0
}

TEST_CASE("zero-potential pressure counts points") {
  OrbitSet per = periodic_points(MapSpec::power(2), 10);
  double est = pressure_estimate(per, MapPotential::constant(0.0)).value;
  CHECK(est == doctest::Approx(std::log(1023.0) / 10.0).epsilon(1e-13));

  OrbitSet pre = preimage_set(MapSpec::power(2), Cx{1.0, 0.0}, 10);
  double est2 = pressure_estimate(pre, MapPotential::constant(0.0)).value;
  CHECK(est2 == doctest::Approx(kLog2).epsilon(1e-13));
}

TEST_CASE("shift pressure: single-site factorization oracle") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  for (double a : {-1.0, 0.3, 2.0}) {
    ShiftPotential pot = ShiftPotential::single_site(2, {0.0, a});
    for (int n : {6, 13, 20}) {
      double est =
          shift_pressure_estimate(spec, Box::line(n), pot, Extension::Periodic, 0, 2)
              .value;
      CHECK(est == doctest::Approx(std::log(1.0 + std::exp(a))).epsilon(1e-13));
    }
  }
  // f = 0 gives log m for any alphabet.
  ShiftSpec m3 = ShiftSpec::make(3, 1);
  double est = shift_pressure_estimate(m3, Box::line(9), ShiftPotential::zero(3, 1),
                                       Extension::Periodic, 0, 2)
                   .value;
  CHECK(est == doctest::Approx(std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("transfer matrix pressure oracles") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  CHECK(transfer_matrix_pressure(spec, ShiftPotential::single_site(2, {0.0, 0.7})) ==
        doctest::Approx(std::log(1.0 + std::exp(0.7))).epsilon(1e-13));
  CHECK(transfer_matrix_pressure(spec, ShiftPotential::zero(2, 1)) ==
        doctest::Approx(kLog2).epsilon(1e-13));
  // Nearest-neighbor agreement reward: Perron eigenvalue of
  // [[e^b, 1], [1, e^b]] is e^b + 1.
  for (double beta : {0.5, 1.0, 2.0}) {
    CHECK(transfer_matrix_pressure(spec, ShiftPotential::nearest_neighbor(2, beta)) ==
          doctest::Approx(std::log(std::exp(beta) + 1.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(
      transfer_matrix_pressure(ShiftSpec::make(2, 2), ShiftPotential::zero(2, 2)),
      Error);
}

TEST_CASE("periodic shift estimates approach the transfer-matrix value") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftPotential nn = ShiftPotential::nearest_neighbor(2, 1.0);
  double tm = transfer_matrix_pressure(spec, nn);
  double est16 =
      shift_pressure_estimate(spec, Box::line(16), nn, Extension::Periodic, 0, 2).value;
  CHECK(std::abs(est16 - tm) <= 0.02);
  // Padded extension carries an O(r/n) boundary effect.
  double padded =
      shift_pressure_estimate(spec, Box::line(16), nn, Extension::Padded, 0, 2).value;
  CHECK(std::abs(padded - tm) <= 2.0 / 16.0 + 1e-9);
}

TEST_CASE("range-3 potential: enumeration vs transfer matrix") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftPotential pot{2,
                     {{0, 0}, {1, 0}, {2, 0}},
                     {0.4, -0.2, 0.1, 0.3, -0.5, 0.2, 0.0, 0.6},
                     "range3"};
  double tm = transfer_matrix_pressure(spec, pot);
  CHECK(tm == doctest::Approx(0.885321274515).epsilon(1e-10));  // regression
  double prev_pad_gap = 1e300;
  for (int n : {12, 15, 18}) {
    double est =
        shift_pressure_estimate(spec, Box::line(n), pot, Extension::Periodic, 0, 2)
            .value;
    CHECK(std::abs(est - tm) <= 1e-4);  // ring sums converge geometrically
    double pad =
        shift_pressure_estimate(spec, Box::line(n), pot, Extension::Padded, 0, 2)
            .value;
    // Padded extension carries an O(r/n) boundary effect, shrinking with n.
    double gap = std::abs(pad - tm);
    CHECK(gap <= 3.0 * pot.max_abs() * 3.0 / n);
    CHECK(gap < prev_pad_gap);
    prev_pad_gap = gap;
  }
}

TEST_CASE("pressure is invariant under translating the potential window") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  std::vector<double> table{0.4, -0.2, 0.1, 0.3};
  ShiftPotential a{2, {{0, 0}, {1, 0}}, table, "w01"};
  ShiftPotential b{2, {{-1, 0}, {0, 0}}, table, "wm10"};
  CHECK(transfer_matrix_pressure(spec, a) == transfer_matrix_pressure(spec, b));
  double ea =
      shift_pressure_estimate(spec, Box::line(14), a, Extension::Periodic, 0, 2).value;
  double eb =
      shift_pressure_estimate(spec, Box::line(14), b, Extension::Periodic, 0, 2).value;
  CHECK(ea == eb);
}

TEST_CASE("2-d Ising-type brute force across box sizes") {
  ShiftSpec spec = ShiftSpec::make(2, 2);
  ShiftPotential pot = ShiftPotential::ising2d(2, 0.5);
  double p44 =
      shift_pressure_estimate(spec, Box::rect(4, 4), pot, Extension::Periodic, 0, 2)
          .value;
  double p45 =
      shift_pressure_estimate(spec, Box::rect(4, 5), pot, Extension::Periodic, 0, 2)
          .value;
  CHECK(std::abs(p44 - p45) <= 0.15);
  CHECK(p44 == doctest::Approx(1.262579439055).epsilon(1e-9));  // regression
}

TEST_CASE("pressure curve of a power map is affine") {
  PressureCurve curve = pressure_curve(MapSpec::power(2), OrbitMethod::Periodic, 12,
                                       default_t_grid(), {}, 2);
  double worst = 0.0;
  for (int k = 1; k + 1 < curve.size(); ++k) {
    worst = std::max(worst, std::abs(curve.P[k + 1] - 2 * curve.P[k] + curve.P[k - 1]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("pressure curve of the quadratic is convex and decreasing") {
  PressureCurve curve = pressure_curve(MapSpec::quadratic(Cx{0.1, 0.0}),
                                       OrbitMethod::Periodic, 8, default_t_grid(),
                                       {}, 2);
  for (int k = 1; k + 1 < curve.size(); ++k) {
    CHECK(curve.P[k + 1] - 2 * curve.P[k] + curve.P[k - 1] >= -1e-8);
    CHECK(curve.P[k] < curve.P[k - 1]);
  }
}

TEST_CASE("pressure translation and monotonicity") {
  OrbitSet orbit = preimage_set(MapSpec::quadratic(Cx{0.1, 0.0}),
                                repelling_fixed_point(MapSpec::quadratic(Cx{0.1, 0.0})),
                                6);
  MapPotential f = MapPotential::re_power(1).scaled(0.6);
  MapPotential fc = f;
  fc.coeff[0] += 2.2;
  double p = pressure_estimate(orbit, f).value;
  CHECK(pressure_estimate(orbit, fc).value == doctest::Approx(p + 2.2).epsilon(1e-12));

  MapPotential g = f;
  g.coeff[0] += 0.9;  // g - f = 0.9 > 0 pointwise
  CHECK(p <= pressure_estimate(orbit, g).value + 1e-12);
}

TEST_CASE("pressure curve construction guards") {
  CHECK_THROWS_AS(PressureCurve::from_samples({0, 1, 2}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(
      PressureCurve::from_samples({0, 1, 2, 4, 5}, {1, 2, 3, 4, 5}), Error);
}

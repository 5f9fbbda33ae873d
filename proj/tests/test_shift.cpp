#include <cmath>

#include "doctest.h"
#include "ratelab/numeric.hpp"
#include "ratelab/rng.hpp"
#include "ratelab/shift.hpp"

using namespace ratelab;

TEST_CASE("translate: periodic wrap and padded background") {
  ShiftSpec spec = ShiftSpec::make(3, 1);
  static_cast<void>(spec);
  BoxConfig cfg{Box::line(3), {0, 1, 2}, Extension::Periodic, 0};
  auto v = translate(cfg, 1);
  CHECK(v.at(0) == 1);
  CHECK(v.at(1) == 2);
  CHECK(v.at(2) == 0);  // wraps

  BoxConfig padded{Box::line(3), {0, 1, 2}, Extension::Padded, 2};
  CHECK(translate(padded, 1000).at(0) == 2);
  CHECK(translate(padded, 0).at(0) == 0);
  CHECK(translate(padded, 0).at(1) == 1);
}

TEST_CASE("config enumeration counts m^|Lambda|") {
  ShiftSpec m2 = ShiftSpec::make(2, 1);
  CHECK(config_count(m2, Box::line(3)) == 8);
  ShiftSpec m2d2 = ShiftSpec::make(2, 2);
  CHECK(config_count(m2d2, Box::rect(2, 2)) == 16);
  ShiftSpec m3 = ShiftSpec::make(3, 1);
  CHECK(config_count(m3, Box::line(2)) == 9);
  CHECK_THROWS_AS(config_count(m2, Box::line(25)), CapExceeded);
}

TEST_CASE("config_at is lexicographic and round-trips") {
  ShiftSpec spec = ShiftSpec::make(3, 1);
  Box box = Box::line(2);
  // index 5 = base-3 digits (1, 2) with the first site most significant
  BoxConfig cfg = config_at(spec, box, Extension::Periodic, 0, 5);
  CHECK(cfg.symbols[0] == 1);
  CHECK(cfg.symbols[1] == 2);
  for (long i = 0; i < 9; ++i) {
    CHECK(config_index(spec, config_at(spec, box, Extension::Periodic, 0, i)) == i);
  }
}

TEST_CASE("birkhoff_sum_shift examples") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  static_cast<void>(spec);
  ShiftPotential single = ShiftPotential::single_site(2, {0.0, 1.5});
  BoxConfig cfg{Box::line(6), {1, 0, 1, 1, 0, 0}, Extension::Periodic, 0};
  CHECK(birkhoff_sum_shift(single, cfg) == doctest::Approx(3 * 1.5).epsilon(1e-15));

  ShiftPotential ones = ShiftPotential::single_site(2, {1.0, 1.0});
  CHECK(birkhoff_sum_shift(ones, cfg) == doctest::Approx(6.0).epsilon(1e-15));

  // Nearest-neighbor agreement indicator on the periodic word 01: both
  // shifted reads see a disagreeing pair.
  ShiftPotential nn = ShiftPotential::nearest_neighbor(2, 1.0);
  BoxConfig alt{Box::line(2), {0, 1}, Extension::Periodic, 0};
  CHECK(birkhoff_sum_shift(nn, alt) == 0.0);
}

TEST_CASE("periodic translate by a lattice vector is the identity") {
  ShiftSpec spec = ShiftSpec::make(2, 2);
  Box box = Box::rect(3, 2);
  BoxConfig cfg = config_at(spec, box, Extension::Periodic, 0, 37);
  for (int y = -2; y <= 2; ++y) {
    for (int x = -3; x <= 3; ++x) {
      CHECK(translate(cfg, 3, 0).at(x, y) == cfg.at(x, y));
      CHECK(translate(cfg, 0, 2).at(x, y) == cfg.at(x, y));
      CHECK(translate(cfg, -6, 4).at(x, y) == cfg.at(x, y));
    }
  }
}

TEST_CASE("metric_rho") {
  ShiftSpec spec = ShiftSpec::make(2, 1, 0.5);
  BoxConfig a{Box::line(4), {1, 0, 1, 0}, Extension::Periodic, 0};
  CHECK(metric_rho(spec, a, a) == 0.0);

  BoxConfig b = a;
  b.symbols[0] = 0;  // differs at the origin
  CHECK(metric_rho(spec, a, b) == 1.0);

  // Padded configurations differing first at |x| = 3.
  BoxConfig c3{Box::line(7), {0, 0, 0, 0, 0, 0, 0}, Extension::Padded, 0};
  BoxConfig d3{Box::line(7), {0, 0, 0, 1, 0, 0, 0}, Extension::Padded, 0};
  CHECK(metric_rho(spec, c3, d3) == doctest::Approx(std::pow(0.5, 3)).epsilon(1e-15));
  // Differing at the origin dominates everything else.
  BoxConfig c{Box::line(7), {0, 0, 0, 0, 0, 0, 1}, Extension::Padded, 0};
  BoxConfig d{Box::line(7), {1, 0, 0, 0, 0, 0, 1}, Extension::Padded, 0};
  CHECK(metric_rho(spec, c, d) == 1.0);
}

TEST_CASE("single-site partition functions factorize") {
  SplitMix64 rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    int m = 2 + static_cast<int>(rng.next_below(2));
    ShiftSpec spec = ShiftSpec::make(m, 1);
    Box box = Box::line(3 + static_cast<int>(rng.next_below(6)));
    std::vector<double> values(m);
    for (double& v : values) v = 4.0 * (rng.next_unit() - 0.5);
    ShiftPotential pot = ShiftPotential::single_site(m, values);

    std::vector<double> sums;
    long count = config_count(spec, box);
    for (long i = 0; i < count; ++i) {
      sums.push_back(
          birkhoff_sum_shift(pot, config_at(spec, box, Extension::Periodic, 0, i)));
    }
    double lhs = log_sum_exp(sums);
    double site = 0.0;
    for (double v : values) site += std::exp(v);
    double rhs = box.volume() * std::log(site);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("shift potential JSON round trip") {
  ShiftPotential nn = ShiftPotential::nearest_neighbor(2, 0.75);
  ShiftPotential back = shift_potential_from_json(shift_potential_to_json(nn), 2);
  REQUIRE(back.window.size() == nn.window.size());
  CHECK(back.window == nn.window);
  CHECK(back.table == nn.table);

  ShiftPotential parsed = shift_potential_from_json(
      R"({"window": [[0,0],[1,0]], "values": {"3": 0.5, "0": 0.25}})", 2);
  CHECK(parsed.table[0] == 0.25);
  CHECK(parsed.table[3] == 0.5);
  CHECK(parsed.table[1] == 0.0);
  CHECK_THROWS_AS(shift_potential_from_json(
                      R"({"window": [[0,0]], "values": {"7": 1.0}})", 2),
                  Error);
}

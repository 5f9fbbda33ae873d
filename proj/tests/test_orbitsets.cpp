#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "ratelab/orbitsets.hpp"

using namespace ratelab;

namespace {
const double kTwoPi = 6.283185307179586476925286766559;

// Smallest distance from z to any k-th root of unity.
double root_of_unity_gap(Cx z, long k) {
  double best = 1e300;
  for (long j = 0; j < k; ++j) {
    best = std::min(best, std::abs(z - std::polar(1.0, kTwoPi * j / k)));
  }
  return best;
}
}  // namespace

TEST_CASE("power-map periodic points are roots of unity") {
  // z^{2^3} = z on |z| = 1 <=> z^7 = 1.
  OrbitSet o = periodic_points(MapSpec::power(2), 3);
  REQUIRE(o.points.size() == 7);
  for (Cx z : o.points) {
    CHECK(root_of_unity_gap(z, 7) <= 1e-12);
    CHECK(std::abs(iterate(o.map, z, 3) - z) <= 1e-9);
  }

  OrbitSet o2 = periodic_points(MapSpec::power(3), 2);
  REQUIRE(o2.points.size() == 8);
  for (Cx z : o2.points) CHECK(root_of_unity_gap(z, 8) <= 1e-12);
}

TEST_CASE("quadratic periodic points at c=0 drop the attracting fixed point") {
  OrbitSet o = periodic_points(MapSpec::quadratic(Cx{0.0, 0.0}), 2);
  REQUIRE(o.points.size() == 3);  // z^4 = z minus the superattracting 0
  for (Cx z : o.points) {
    CHECK(root_of_unity_gap(z, 3) <= 1e-9);
    CHECK(std::abs(iterate(o.map, z, 2) - z) <= 1e-9);
  }
}

TEST_CASE("quadratic periodic points: residuals and repelling filter") {
  MapSpec map = MapSpec::quadratic(Cx{0.1, 0.0});
  for (int n : {3, 5, 7}) {
    OrbitSet o = periodic_points(map, n);
    CHECK(o.points.size() == (1L << n) - 1);
    for (Cx z : o.points) {
      CHECK(std::abs(iterate(map, z, n) - z) <= 1e-9);
      CHECK(log_deriv_birkhoff(map, z, n) > 0.0);
    }
  }
}

TEST_CASE("periodic cardinality d^n - 1 and entropy growth for z^2") {
  MapSpec map = MapSpec::power(2);
  double prev = 0.0;
  for (int n = 1; n <= 12; ++n) {
    OrbitSet o = periodic_points(map, n);
    REQUIRE(o.points.size() == (1L << n) - 1);
    double rate = std::log(static_cast<double>(o.points.size())) / n;
    if (n > 1) CHECK(rate > prev);
    prev = rate;
  }
  CHECK(std::abs(prev - std::log(2.0)) <= 3e-3);
  // Cap: still exact at n = 20.
  CHECK(periodic_points(map, 20).points.size() == (1L << 20) - 1);
}

TEST_CASE("orbit caps raise CapExceeded") {
  CHECK_THROWS_AS(periodic_points(MapSpec::power(2), 23), CapExceeded);
  CHECK_THROWS_AS(preimage_set(MapSpec::power(4), Cx{1.0, 0.0}, 12), CapExceeded);
}

TEST_CASE("preimage sets have exactly d^n points on the circle") {
  OrbitSet o = preimage_set(MapSpec::power(2), Cx{1.0, 0.0}, 2);
  REQUIRE(o.points.size() == 4);
  for (Cx z : o.points) CHECK(root_of_unity_gap(z, 4) <= 1e-12);

  OrbitSet big = preimage_set(MapSpec::power(2), Cx{1.0, 0.0}, 10);
  REQUIRE(big.points.size() == 1024);
  for (Cx z : big.points) {
    CHECK(std::abs(std::abs(z) - 1.0) <= 1e-9);
    CHECK(std::abs(iterate(big.map, z, 10) - Cx{1.0, 0.0}) <= 1e-9);
  }
}

TEST_CASE("preimage set keeps the critical-value multiplicity") {
  MapSpec map = MapSpec::quadratic(Cx{0.1, 0.0});
  OrbitSet o = preimage_set(map, Cx{0.1, 0.0}, 1);
  REQUIRE(o.points.size() == 2);
  CHECK(o.points[0] == o.points[1]);
}

TEST_CASE("quadratic preimages of the fixed point have small residuals") {
  MapSpec map = MapSpec::quadratic(Cx{0.1, 0.0});
  Cx p = repelling_fixed_point(map);
  OrbitSet o = preimage_set(map, p, 3);
  REQUIRE(o.points.size() == 8);
  for (Cx z : o.points) CHECK(std::abs(iterate(map, z, 3) - p) <= 1e-9);
}

TEST_CASE("bowen distance") {
  MapSpec map = MapSpec::power(2);
  CHECK(bowen_distance(map, Cx{0.3, 0.4}, Cx{0.3, 0.4}, 5) == 0.0);
  CHECK(bowen_distance(map, Cx{1.0, 0.0}, Cx{-1.0, 0.0}, 1) == 2.0);
  // Direct orbit computation: orbits (1,1,1) and (e^{i pi/4}, i, -1); the
  // largest gap is at the second iterate, |1-(-1)| = 2.
  double d = bowen_distance(map, Cx{1.0, 0.0}, std::polar(1.0, kTwoPi / 8), 3);
  CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("separated sets: circle packing bound at the largest legal eps") {
  // Pairwise chord >= eps forces angular gaps >= 2 asin(eps/2); at eps=0.29
  // at most floor(2 pi / 0.2910) = 21 points fit on the unit circle.
  OrbitSet o = separated_set(MapSpec::power(2), 1, 0.29, 10000, 1);
  CHECK(o.points.size() >= 10);
  CHECK(o.points.size() <= 21);
  // eps is capped below 0.3 by contract.
  CHECK_THROWS_AS(separated_set(MapSpec::power(2), 1, 1.9, 100, 1), Error);
}

TEST_CASE("separated sets: tiny eps admits every sample point") {
  OrbitSet o = separated_set(MapSpec::power(2), 1, 1e-9, 50, 9);
  CHECK(o.points.size() == 50);
}

TEST_CASE("separated sets: pairwise separation holds exhaustively") {
  OrbitSet o = separated_set(MapSpec::quadratic(Cx{0.1, 0.0}), 6, 0.2, 20000, 1);
  REQUIRE(o.points.size() > 10);
  REQUIRE(o.points.size() <= 1000);
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(bowen_distance(o.map, o.points[i], o.points[j], 6) >= 0.2);
    }
  }
}

TEST_CASE("separated sets: maximality relative to the sample") {
  MapSpec map = MapSpec::power(2);
  OrbitSet o = separated_set(map, 4, 0.25, 2000, 3);
  auto sample = sample_julia(map, 2000, 3);
  for (Cx y : sample) {
    double nearest = 1e300;
    for (Cx z : o.points) nearest = std::min(nearest, bowen_distance(map, y, z, 4));
    CHECK(nearest < 0.25);  // every candidate is eps-close to some member
  }
}

TEST_CASE("separated set growth regression (n=8, eps=0.1)") {
  // Greedy packing over 1e5 samples; deterministic by seed. The packing
  // exponent approaches log 2 only like log(C/eps)/n, so at n = 8 it sits
  // near 1.08; the count itself is the pinned regression value.
  OrbitSet o = separated_set(MapSpec::power(2), 8, 0.1, 100000, 1);
  CHECK(o.points.size() == 5811);
}

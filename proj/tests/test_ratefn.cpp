#include <cmath>

#include "doctest.h"
#include "ratelab/numeric.hpp"
#include "ratelab/pressure.hpp"
#include "ratelab/ratefn.hpp"

using namespace ratelab;

namespace {

const double kLog2 = std::log(2.0);

PressureCurve quadratic_curve(int n = 12) {
  static PressureCurve curve = pressure_curve(
      MapSpec::quadratic(Cx{0.1, 0.0}), OrbitMethod::Periodic, n,
      default_t_grid(), {}, 2);
  return curve;
}

PressureCurve affine_curve(double a, double b) {
  // P(t) = a - b t on the default grid.
  std::vector<double> t = default_t_grid(), p;
  for (double x : t) p.push_back(a - b * x);
  return PressureCurve::from_samples(t, p);
}

}  // namespace

TEST_CASE("dP on synthetic and power-map curves") {
  PressureCurve aff = affine_curve(1.5, 0.4);
  for (double t : {-2.0, -0.3, 0.0, 1.7}) {
    CHECK(dP(aff, t) == doctest::Approx(-0.4).epsilon(1e-13));
  }
  PressureCurve pw = pressure_curve(MapSpec::power(2), OrbitMethod::Periodic, 10,
                                    default_t_grid(), {}, 2);
  for (double t : {-1.0, 0.0, 2.0}) {
    CHECK(dP(pw, t) == doctest::Approx(-kLog2).epsilon(1e-9));
  }
  CHECK_THROWS_AS(dP(aff, -2.95), OutOfDomain);
  CHECK_THROWS_AS(dP(aff, 3.2), OutOfDomain);
}

TEST_CASE("quadratic curve: derivative bracket and chi at the entropy state") {
  PressureCurve curve = quadratic_curve();
  // Regression bracket for the Lyapunov spectrum seen on the grid.
  auto [lo, hi] = chi_range(curve);
  CHECK(lo > 0.0);
  CHECK(lo == doctest::Approx(0.671358886597).epsilon(1e-8));
  CHECK(hi == doctest::Approx(0.705133218781).epsilon(1e-8));
  for (double t : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    double chi = -dP(curve, t);
    CHECK(chi > 0.6);
    CHECK(chi < 0.8);
  }
  // chi(mu_0) = log 2 for a connected quadratic Julia set.
  CHECK(-dP(curve, 0.0) == doctest::Approx(kLog2).epsilon(1e-9));
}

TEST_CASE("entropy_of_s") {
  PressureCurve pw = pressure_curve(MapSpec::power(2), OrbitMethod::Periodic, 12,
                                    default_t_grid(), {}, 2);
  for (double s : {-1.0, 0.0, 1.5}) {
    CHECK(std::abs(entropy_of_s(pw, s) - kLog2) <= 1e-4);
  }
  PressureCurve curve = quadratic_curve();
  // h_{mu_0} = P(0) exactly (the s-term vanishes).
  CHECK(entropy_of_s(curve, 0.0) == curve_eval(curve, 0.0));
  double h1 = entropy_of_s(curve, 1.0);
  CHECK(h1 > 0.0);
  CHECK(h1 <= kLog2);
  CHECK(h1 == doctest::Approx(0.689883279817).epsilon(1e-8));  // regression
}

TEST_CASE("solve_s_x recovers the defining parameter") {
  PressureCurve curve = quadratic_curve();
  CHECK(std::abs(solve_s_x(curve, -dP(curve, 0.0))) <= 1e-6);
  CHECK(std::abs(solve_s_x(curve, -dP(curve, 1.0)) - 1.0) <= 1e-6);
  auto [lo, hi] = chi_range(curve);
  CHECK_THROWS_AS(solve_s_x(curve, hi + 0.01), OutOfRange);
  CHECK_THROWS_AS(solve_s_x(curve, lo - 0.01), OutOfRange);
}

TEST_CASE("solve_s_x refuses affine curves") {
  PressureCurve pw = pressure_curve(MapSpec::power(3), OrbitMethod::Periodic, 8,
                                    default_t_grid(), {}, 2);
  CHECK(curve_degenerate(pw));
  CHECK_THROWS_AS(solve_s_x(pw, std::log(3.0)), DegenerateCurve);
}

TEST_CASE("rate_level1: degenerate power-map branch") {
  PressureCurve pw = pressure_curve(MapSpec::power(2), OrbitMethod::Periodic, 12,
                                    default_t_grid(), {}, 2);
  RateValue zero = rate_level1(pw, 0.3, kLog2);
  CHECK(!zero.infinite);
  CHECK(zero.value == 0.0);
  for (double x : {kLog2 + 0.1, kLog2 - 0.1, 0.2, 2.0}) {
    CHECK(rate_level1(pw, 0.3, x).infinite);
  }
}

TEST_CASE("rate_level1 vanishes at the ensemble mean") {
  PressureCurve curve = quadratic_curve();
  for (double t : {0.0, 0.5, 1.0}) {
    RateValue rv = rate_level1(curve, t, -dP(curve, t));
    REQUIRE(!rv.infinite);
    CHECK(std::abs(rv.value) <= 1e-6);
  }
}

TEST_CASE("legendre duality on the interior grid") {
  PressureCurve curve = quadratic_curve();
  auto [lo, hi] = chi_range(curve);
  double margin = 0.02 * (hi - lo);
  for (double t : {0.0, 0.5, 1.0}) {
    for (double x : linspace(lo + margin, hi - margin, 25)) {
      RateValue a = rate_level1(curve, t, x);
      RateValue b = legendre_sup(curve, t, x);
      REQUIRE(!a.infinite);
      REQUIRE(!b.infinite);
      CHECK(std::abs(a.value - b.value) <= 1e-5);
      CHECK(b.value >= -1e-12);  // s = 0 already gives 0
    }
  }
}

TEST_CASE("legendre_sup: conjugate of an affine curve is an indicator") {
  PressureCurve aff = affine_curve(0.9, 0.55);
  RateValue at_slope = legendre_sup(aff, 0.2, 0.55);
  CHECK(!at_slope.infinite);
  CHECK(at_slope.value == 0.0);
  CHECK(legendre_sup(aff, 0.2, 0.75).infinite);
  CHECK(legendre_sup(aff, 0.2, 0.75).value > 1e3);  // sentinel is huge
}

TEST_CASE("tangency identity across t") {
  // I(t, x) - I(t', x) = P(t) - P(t') + (t - t') x; the s_x term cancels.
  PressureCurve curve = quadratic_curve();
  auto [lo, hi] = chi_range(curve);
  for (double x : linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 7)) {
    double i0 = rate_level1(curve, 0.25, x).value;
    double i1 = rate_level1(curve, 1.25, x).value;
    double expected =
        curve_eval(curve, 0.25) - curve_eval(curve, 1.25) + (0.25 - 1.25) * x;
    CHECK(std::abs((i0 - i1) - expected) <= 1e-9);
  }
}

TEST_CASE("rate_level1 is convex in x") {
  PressureCurve curve = quadratic_curve();
  auto [lo, hi] = chi_range(curve);
  auto xs = linspace(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo), 30);
  std::vector<double> vals;
  for (double x : xs) vals.push_back(rate_level1(curve, 0.5, x).value);
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    CHECK(vals[i + 1] - 2 * vals[i] + vals[i - 1] >= -1e-6);
  }
}

TEST_CASE("rate_level2 closed forms") {
  // Uniform Bernoulli is the equilibrium state of f = 0: zero rate.
  CHECK(rate_level2(kLog2, RateLevel2Input::bernoulli({0.5, 0.5}), 0.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // Biased Bernoulli: log 2 - H(p).
  double p = 0.3;
  double hp = -p * std::log(p) - (1 - p) * std::log(1 - p);
  CHECK(rate_level2(kLog2, RateLevel2Input::bernoulli({1 - p, p}), 0.0) ==
        doctest::Approx(kLog2 - hp).epsilon(1e-13));
  // Markov chain entropy: -sum pi_i P_ij log P_ij with pi = (1/2, 1/2).
  std::vector<std::vector<double>> P{{0.9, 0.1}, {0.1, 0.9}};
  double h_markov = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1));
  CHECK(invariant_entropy(RateLevel2Input::markov(P)) ==
        doctest::Approx(h_markov).epsilon(1e-10));
  // Equilibrium state mu_t has zero rate for f = k_t.
  PressureCurve curve = quadratic_curve();
  for (double t : {0.0, 0.5}) {
    double chi = -dP(curve, t);
    double rate = rate_level2(curve_eval(curve, t),
                              RateLevel2Input::mu_s(curve, t), -t * chi);
    CHECK(std::abs(rate) <= 1e-5);
  }
}

TEST_CASE("rate_level2 input validation") {
  CHECK_THROWS_AS(rate_level2(0.0, RateLevel2Input::bernoulli({0.6, 0.6}), 0.0),
                  Error);
  CHECK_THROWS_AS(
      rate_level2(0.0, RateLevel2Input::markov({{0.5, 0.6}, {0.5, 0.5}}), 0.0),
      Error);
  // Entropy log 2 against pressure log 2 - 0.1 drives the rate negative.
  CHECK_THROWS_AS(
      rate_level2(kLog2 - 0.1, RateLevel2Input::bernoulli({0.5, 0.5}), 0.0),
      NegativeRate);
}

TEST_CASE("contraction consistency: level-2 rate on mu_s matches level-1") {
  PressureCurve curve = quadratic_curve();
  auto [lo, hi] = chi_range(curve);
  for (double x : linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 9)) {
    double t = 0.5;
    double s = solve_s_x(curve, x);
    // mu_{s_x} has mean chi = x, so mu(k_t) = -t x.
    double level2 =
        rate_level2(curve_eval(curve, t), RateLevel2Input::mu_s(curve, s), -t * x);
    double level1 = rate_level1(curve, t, x).value;
    CHECK(std::abs(level2 - level1) <= 1e-5);
  }
}

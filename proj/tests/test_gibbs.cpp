#include <cmath>

#include "doctest.h"
#include "ratelab/gibbs.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/rng.hpp"

using namespace ratelab;

TEST_CASE("birkhoff sums of map potentials") {
  MapSpec pw = MapSpec::power(2);
  Cx y = std::polar(1.0, 1.1);
  CHECK(birkhoff_sum(pw, MapPotential::kt(1.0), y, 6) ==
        doctest::Approx(-6 * std::log(2.0)).epsilon(1e-13));
  CHECK(birkhoff_sum(pw, MapPotential::constant(0.7), y, 9) ==
        doctest::Approx(9 * 0.7).epsilon(1e-14));

  MapSpec q = MapSpec::quadratic(Cx{0.1, 0.0});
  Cx p = (1.0 + std::sqrt(Cx{1.0, 0.0} - 4.0 * q.c)) / 2.0;
  CHECK(birkhoff_sum(q, MapPotential::kt(1.0), p, 3) ==
        doctest::Approx(-3 * std::log(std::abs(2.0 * p))).epsilon(1e-12));
}

TEST_CASE("gibbs weights are uniform when f = 0") {
  OrbitSet orbit = periodic_points(MapSpec::power(2), 6);
  MapEnsemble nu = gibbs_weights(orbit, MapPotential::constant(0.0));
  double expected = -std::log(static_cast<double>(nu.size()));
  for (double lw : nu.log_weights) {
    CHECK(lw == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(std::abs(log_sum_exp(nu.log_weights)) <= 1e-12);
}

TEST_CASE("gibbs weights are uniform for k_t on power maps") {
  // All Birkhoff sums equal -t n log d on the circle.
  OrbitSet orbit = periodic_points(MapSpec::power(2), 7);
  MapEnsemble nu = gibbs_weights(orbit, MapPotential::kt(1.3));
  double expected = -std::log(static_cast<double>(nu.size()));
  for (double lw : nu.log_weights) {
    CHECK(lw == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("shift gibbs weights on a 2-site box") {
  // Configurations 00, 01, 10, 11 have Birkhoff sums 0, a, a, 2a.
  const double a = 0.8;
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftEnsemble nu = gibbs_weights_shift(spec, Box::line(2), Extension::Periodic, 0,
                                         ShiftPotential::single_site(2, {0.0, a}));
  REQUIRE(nu.size() == 4);
  double z = std::log(1.0 + 2.0 * std::exp(a) + std::exp(2 * a));
  CHECK(nu.log_weights[0] == doctest::Approx(-z).epsilon(1e-13));
  CHECK(nu.log_weights[1] == doctest::Approx(a - z).epsilon(1e-13));
  CHECK(nu.log_weights[2] == doctest::Approx(a - z).epsilon(1e-13));
  CHECK(nu.log_weights[3] == doctest::Approx(2 * a - z).epsilon(1e-13));
}

TEST_CASE("ensemble_mean: Lyapunov pairing is log 2 on the circle") {
  OrbitSet orbit = periodic_points(MapSpec::power(2), 8);
  MapEnsemble nu = gibbs_weights(orbit, MapPotential::kt(0.7));
  CHECK(ensemble_mean(nu, MapPotential::kt(-1.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(ensemble_mean(nu, MapPotential::constant(2.5)) ==
        doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("ensemble_mean is linear in g") {
  OrbitSet orbit = preimage_set(MapSpec::quadratic(Cx{0.1, 0.0}),
                                repelling_fixed_point(MapSpec::quadratic(Cx{0.1, 0.0})),
                                5);
  MapEnsemble nu = gibbs_weights(orbit, MapPotential::kt(0.5));
  MapPotential g1 = MapPotential::re_power(2);
  MapPotential g2 = MapPotential::im_power(1);
  std::array<double, 15> combined{};
  for (int i = 0; i < 15; ++i) combined[i] = 2.0 * g1.coeff[i] - 3.0 * g2.coeff[i];
  double lhs = ensemble_mean(nu, MapPotential::poly(combined, "combo"));
  double rhs = 2.0 * ensemble_mean(nu, g1) - 3.0 * ensemble_mean(nu, g2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("shift marginal equals the exact Gibbs single-site law") {
  const double a = -0.6;
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftPotential f = ShiftPotential::single_site(2, {0.0, a});
  ShiftPotential ind = ShiftPotential::single_site(2, {0.0, 1.0});
  double exact = std::exp(a) / (1.0 + std::exp(a));
  for (int n : {4, 9, 14}) {
    ShiftEnsemble nu =
        gibbs_weights_shift(spec, Box::line(n), Extension::Periodic, 0, f);
    CHECK(ensemble_mean_shift(nu, ind) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("weak* distance: identity, axioms, and scales") {
  TestFamily fam = TestFamily::default_family();
  REQUIRE(fam.members.size() == 9);
  ReferenceMeasure ref = ReferenceMeasure::uniform_circle(fam);
  REQUIRE(ref.values.size() == 9);
  CHECK(ref.values[0] == doctest::Approx(1.0).epsilon(1e-14));  // constant
  for (std::size_t j = 1; j < ref.values.size(); ++j) {
    CHECK(ref.values[j] == 0.0);  // nonconstant monomial moments vanish
  }
  CHECK(weakstar_distance(ref.values, ref.values, fam.scales) == 0.0);

  SplitMix64 rng(3);
  auto rnd = [&rng, &fam]() {
    std::vector<double> v(fam.members.size());
    for (double& x : v) x = 4.0 * (rng.next_unit() - 0.5);
    return v;
  };
  for (int it = 0; it < 200; ++it) {
    auto x = rnd(), y = rnd(), z = rnd();
    double xy = weakstar_distance(x, y, fam.scales);
    CHECK(xy == weakstar_distance(y, x, fam.scales));
    CHECK(xy <= weakstar_distance(x, z, fam.scales) +
                    weakstar_distance(z, y, fam.scales) + 1e-15);
    CHECK(xy <= 1.0);  // sum of 2^-j caps the metric
  }
}

TEST_CASE("periodic empirical measures vs the uniform circle reference") {
  // Low-period atoms (the fixed point, short cycles) are genuinely far from
  // uniform, so the pointwise max stays O(0.1); the ensemble barycenter is
  // moment-exact. Both values are pinned as regressions.
  MapSpec map = MapSpec::power(2);
  OrbitSet orbit = periodic_points(map, 12);
  TestFamily fam = TestFamily::default_family();
  ReferenceMeasure ref = ReferenceMeasure::uniform_circle(fam);

  double worst = 0.0;
  MapEnsemble nu = gibbs_weights(orbit, MapPotential::constant(0.0));
  std::vector<double> bary(fam.members.size(), 0.0);
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    auto p = pairings(map, fam, orbit.points[i], 12);
    worst = std::max(worst, weakstar_distance(p, ref.values, fam.scales));
    for (std::size_t j = 0; j < p.size(); ++j) {
      bary[j] += std::exp(nu.log_weights[i]) * p[j];
    }
  }
  CHECK(worst == doctest::Approx(0.137830).epsilon(1e-4));
  CHECK(weakstar_distance(bary, ref.values, fam.scales) <= 1e-12);
}

TEST_CASE("gibbs weights are invariant under adding a constant to f") {
  OrbitSet orbit = periodic_points(MapSpec::quadratic(Cx{0.1, 0.0}), 6);
  MapPotential f = MapPotential::re_power(2).scaled(0.4);
  MapPotential g = f;
  g.coeff[0] += 1.7;
  MapEnsemble a = gibbs_weights(orbit, f);
  MapEnsemble b = gibbs_weights(orbit, g);
  for (std::size_t i = 0; i < a.log_weights.size(); ++i) {
    CHECK(std::abs(a.log_weights[i] - b.log_weights[i]) <= 1e-12);
  }
}

TEST_CASE("bernoulli reference pairings") {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  ShiftTestFamily fam = ShiftTestFamily::single_site(spec);
  REQUIRE(fam.members.size() == 1);
  ReferenceMeasure ref = bernoulli_reference(fam, {0.7, 0.3});
  CHECK(ref.values[0] == doctest::Approx(0.3).epsilon(1e-15));
}

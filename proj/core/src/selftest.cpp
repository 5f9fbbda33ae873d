#include "ratelab/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ratelab/deviation.hpp"
#include "ratelab/gibbs.hpp"
#include "ratelab/io.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/orbitsets.hpp"
#include "ratelab/pressure.hpp"
#include "ratelab/ratefn.hpp"
#include "ratelab/rng.hpp"
#include "ratelab/shift.hpp"

namespace ratelab {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

using CriterionBody = std::function<bool(std::string&)>;

CriterionResult run_one(const std::string& name, double time_limit,
                        const CriterionBody& body) {
  CriterionResult r{name, false, "", 0.0};
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = body(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0.0 && r.seconds >= time_limit) {
    r.pass = false;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("over time limit ") +
                num(time_limit) + "s";
  }
  return r;
}

double binomial(int n, int k) {
  // Exact in double for n <= 20.
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return std::round(v);
}

double binary_entropy(double p) {
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

// ---- criteria ---------------------------------------------------------------

bool power_pressure_exact(std::string& detail, int w) {
  double worst = 0.0;
  for (int d : {2, 3}) {
    OrbitSet orbit = periodic_points(MapSpec::power(d), 12);
    OrbitDerivCache cache = cache_log_derivs(orbit, w);
    for (double t : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
      double est = pressure_estimate_kt(cache, t);
      worst = std::max(worst, std::abs(est - (1.0 - t) * std::log(double(d))));
    }
  }
  detail = "max |est - (1-t)log d| = " + num(worst);
  return worst <= 1e-3;
}

bool degenerate_rate(std::string& detail, int w) {
  PressureCurve curve =
      pressure_curve(MapSpec::power(2), OrbitMethod::Periodic, 12,
                     default_t_grid(), {}, w);
  const double logd = std::log(2.0);
  bool ok = true;
  for (double t : {-0.5, 0.0, 0.7, 2.0}) {
    RateValue at_logd = rate_level1(curve, t, logd);
    ok = ok && !at_logd.infinite && at_logd.value == 0.0;
    for (double x : {logd - 0.2, logd + 0.2, 0.1, 2.0}) {
      ok = ok && rate_level1(curve, t, x).infinite;
    }
  }
  detail = ok ? "zero at log d, +inf flag elsewhere" : "degenerate branch broken";
  return ok;
}

bool shift_factorization(std::string& detail, int w) {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  Box box = Box::line(20);
  double worst = 0.0;
  for (double a : {-1.0, 0.3, 2.0}) {
    ShiftPotential pot = ShiftPotential::single_site(2, {0.0, a});
    double est = shift_pressure_estimate(spec, box, pot, Extension::Periodic, 0, w).value;
    double exact = std::log(1.0 + std::exp(a));
    double tm = transfer_matrix_pressure(spec, pot);
    worst = std::max(worst, std::abs(est - exact) / std::max(1.0, std::abs(exact)));
    worst = std::max(worst, std::abs(est - tm) / std::max(1.0, std::abs(tm)));
  }
  detail = "max relative gap = " + num(worst);
  return worst <= 1e-12;
}

bool transfer_nearest_neighbor(std::string& detail, int w) {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  bool ok = true;
  double worst_tm = 0.0, worst_est = 0.0;
  for (double beta : {0.5, 1.0}) {
    ShiftPotential pot = ShiftPotential::nearest_neighbor(2, beta);
    double tm = transfer_matrix_pressure(spec, pot);
    double closed = std::log(std::exp(beta) + 1.0);
    worst_tm = std::max(worst_tm, std::abs(tm - closed));
    double est =
        shift_pressure_estimate(spec, Box::line(16), pot, Extension::Periodic, 0, w)
            .value;
    worst_est = std::max(worst_est, std::abs(est - tm));
  }
  ok = worst_tm <= 1e-10 && worst_est <= 0.02;
  detail = "|tm - closed| = " + num(worst_tm) + ", |est - tm| = " + num(worst_est);
  return ok;
}

bool legendre_duality(std::string& detail, int w) {
  PressureCurve curve =
      pressure_curve(MapSpec::quadratic(Cx{0.1, 0.0}), OrbitMethod::Periodic, 12,
                     default_t_grid(), {}, w);
  auto [lo, hi] = chi_range(curve);
  double margin = 0.02 * (hi - lo);
  std::vector<double> xs = linspace(lo + margin, hi - margin, 40);
  double max_gap = 0.0, min_second_diff = 0.0, worst_zero = 0.0;
  for (double t : {0.0, 0.5, 1.0}) {
    std::vector<double> rate;
    for (double x : xs) {
      RateValue a = rate_level1(curve, t, x);
      RateValue b = legendre_sup(curve, t, x);
      if (a.infinite || b.infinite) return false;
      max_gap = std::max(max_gap, std::abs(a.value - b.value));
      rate.push_back(a.value);
    }
    for (std::size_t i = 1; i + 1 < rate.size(); ++i) {
      min_second_diff =
          std::min(min_second_diff, rate[i + 1] - 2.0 * rate[i] + rate[i - 1]);
    }
    RateValue at_mean = rate_level1(curve, t, -dP(curve, t));
    if (at_mean.infinite) return false;
    worst_zero = std::max(worst_zero, std::abs(at_mean.value));
  }
  detail = "max duality gap = " + num(max_gap) +
           ", min 2nd diff = " + num(min_second_diff) +
           ", |I(chi(t))| = " + num(worst_zero);
  return max_gap <= 1e-5 && min_second_diff >= -1e-6 && worst_zero <= 1e-4;
}

bool cramer_binomial(std::string& detail, int w) {
  ShiftSpec spec = ShiftSpec::make(2, 1);
  Box box = Box::line(20);
  ShiftEnsemble nu = gibbs_weights_shift(spec, box, Extension::Periodic, 0,
                                         ShiftPotential::zero(2, 1), w);
  ShiftPotential k = ShiftPotential::single_site(2, {0.0, 1.0}, "ind1");
  double worst_exact = 0.0, worst_asym = 0.0;
  for (double x : {0.6, 0.7, 0.8}) {
    double eps = x - 0.5;
    DeviationReport rep = deviation_prob_shift(nu, k, 0.5, eps, w);
    if (rep.empty_event) return false;
    // Independent binomial route, same event semantics.
    KahanSum acc;
    for (int j = 0; j <= 20; ++j) {
      if (std::abs(j / 20.0 - 0.5) >= eps) acc.add(binomial(20, j));
    }
    double oracle = (-std::log(1048576.0) + std::log(acc.value())) / 20.0;
    double asym = -(std::log(2.0) - binary_entropy(x));
    worst_exact = std::max(worst_exact, std::abs(rep.estimate - oracle));
    worst_asym = std::max(worst_asym, std::abs(rep.estimate - asym));
  }
  detail = "binomial gap = " + num(worst_exact) + ", Stirling gap = " + num(worst_asym);
  return worst_exact <= 1e-12 && worst_asym <= 0.08;
}

bool lyapunov_tail(std::string& detail, int w) {
  OrbitSet orbit = periodic_points(MapSpec::quadratic(Cx{0.1, 0.0}), 12);
  OrbitDerivCache cache = cache_log_derivs(orbit, w);
  PressureCurve curve = pressure_curve(cache, default_t_grid(), w);
  double worst = 0.0;
  for (double s : {0.0, 1.0}) {
    double chi = -dP(curve, s);
    double p_s = pressure_estimate_kt(cache, s);
    DeviationReport rep = lyapunov_tail_weighted(cache, s, chi, TailSide::Above);
    if (rep.empty_event) return false;
    worst = std::max(worst, std::abs(rep.estimate - p_s));
  }
  detail = "max |tail - P(s)| = " + num(worst);
  return worst <= 0.1;
}

bool barycenter_convergence_criterion(std::string& detail, int w) {
  // (i) shift single-site marginals, exact by factorization.
  const double a = 0.7;
  double exact = std::exp(a) / (1.0 + std::exp(a));
  double worst_marginal = 0.0;
  {
    ShiftSpec spec = ShiftSpec::make(2, 1);
    ShiftPotential f = ShiftPotential::single_site(2, {0.0, a});
    ShiftTestFamily battery = ShiftTestFamily::single_site(spec);
    std::vector<Box> boxes{Box::line(4), Box::line(8), Box::line(12), Box::line(16)};
    for (const auto& row :
         barycenter_convergence_shift(spec, boxes, Extension::Periodic, 0, f,
                                      battery, w)) {
      worst_marginal = std::max(worst_marginal, std::abs(row.means[0] - exact));
    }
    ShiftSpec spec2 = ShiftSpec::make(2, 2);
    ShiftPotential f2 = ShiftPotential::single_site(2, {0.0, a});
    ShiftTestFamily battery2 = ShiftTestFamily::single_site(spec2);
    std::vector<Box> boxes2{Box::rect(2, 2), Box::rect(3, 3)};
    for (const auto& row :
         barycenter_convergence_shift(spec2, boxes2, Extension::Periodic, 0, f2,
                                      battery2, w)) {
      worst_marginal = std::max(worst_marginal, std::abs(row.means[0] - exact));
    }
  }

  // (ii) quadratic ensemble k_{-1}-mean converging to -dP(t).
  MapSpec map = MapSpec::quadratic(Cx{0.1, 0.0});
  PressureCurve curve =
      pressure_curve(map, OrbitMethod::Periodic, 12, default_t_grid(), {}, w);
  auto rows = barycenter_convergence(map, OrbitMethod::Periodic,
                                     MapPotential::kt(0.5), {8, 9, 10, 11, 12},
                                     TestFamily::default_family(), &curve, {}, w);
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].gap <= rows[i - 1].gap)) decreasing = false;
  }
  double final_gap = rows.back().gap;
  detail = "marginal gap = " + num(worst_marginal) + ", final k(-1) gap = " +
           num(final_gap) + (decreasing ? ", decreasing" : ", NOT decreasing");
  return worst_marginal <= 1e-12 && final_gap <= 0.05 && decreasing;
}

bool mc_birkhoff(std::string& detail, int w) {
  MapSpec map = MapSpec::power(2);
  MapPotential g = MapPotential::re_power(1).scaled(0.3);
  McEstimate mc = mc_birkhoff_reference(map, 14, 1000000, 2024, g, w);
  OrbitSet orbit = periodic_points(map, 14);
  double pe = pressure_estimate(orbit, g, w).value;
  double gap = std::abs(mc.value - (pe - std::log(2.0)));
  detail = "|mc - (P(g) - log 2)| = " + num(gap) + " (se " + num(mc.std_error) + ")";
  return gap <= 0.05;
}

// ---- randomized property suites (criterion 10) ------------------------------

MapSpec random_map(SplitMix64& rng) {
  if (rng.next_below(2) == 0) {
    return MapSpec::power(2 + static_cast<int>(rng.next_below(3)));
  }
  double re = 0.28 * (rng.next_unit() - 0.5);
  double im = 0.28 * (rng.next_unit() - 0.5);
  return MapSpec::quadratic(Cx{re, im});
}

MapPotential random_poly(SplitMix64& rng, double scale = 1.0) {
  std::array<double, 15> coeff{};
  for (int i = 0; i < 6; ++i) coeff[i] = scale * 2.0 * (rng.next_unit() - 0.5);
  return MapPotential::poly(coeff, "rand");
}

bool property_suites(std::string& detail, int w) {
  static_cast<void>(w);
  int failures = 0;
  const int kCases = 1000;

  // Weight normalization and invariance under adding a constant.
  {
    SplitMix64 rng(7001);
    for (int it = 0; it < kCases; ++it) {
      MapSpec map = random_map(rng);
      int n = 2 + static_cast<int>(rng.next_below(4));
      OrbitSet orbit = preimage_set(map, repelling_fixed_point(map), n);
      MapPotential f =
          rng.next_below(4) == 0 ? MapPotential::kt(4.0 * (rng.next_unit() - 0.5))
                                 : random_poly(rng);
      MapEnsemble nu = gibbs_weights(orbit, f);
      if (std::abs(log_sum_exp(nu.log_weights)) > 1e-12) ++failures;
      if (!f.is_kt()) {
        MapPotential g = f;
        g.coeff[0] += 3.0 * (rng.next_unit() - 0.5);
        MapEnsemble nu2 = gibbs_weights(orbit, g);
        double d = 0.0;
        for (std::size_t i = 0; i < nu.log_weights.size(); ++i) {
          d = std::max(d, std::abs(nu.log_weights[i] - nu2.log_weights[i]));
        }
        if (d > 1e-12) ++failures;
      }
    }
  }

  // Pressure translation, monotonicity, convexity.
  {
    SplitMix64 rng(7002);
    for (int it = 0; it < kCases; ++it) {
      MapSpec map = random_map(rng);
      int n = 2 + static_cast<int>(rng.next_below(4));
      OrbitSet orbit = preimage_set(map, repelling_fixed_point(map), n);
      MapPotential f = random_poly(rng);
      double c = 4.0 * (rng.next_unit() - 0.5);
      MapPotential fc = f;
      fc.coeff[0] += c;
      double p1 = pressure_estimate(orbit, f).value;
      double p2 = pressure_estimate(orbit, fc).value;
      if (std::abs(p2 - p1 - c) > 1e-9) ++failures;

      // g - f = a + b Re z with a >= 1.3|b| is nonnegative on |z| <= 1.3.
      double b = 2.0 * (rng.next_unit() - 0.5);
      double extra = rng.next_unit();
      MapPotential g = f;
      g.coeff[0] += 1.3 * std::abs(b) + extra;
      g.coeff[1] += b;
      double pg = pressure_estimate(orbit, g).value;
      if (!(p1 <= pg + 1e-12)) ++failures;

      OrbitDerivCache cache = cache_log_derivs(orbit);
      double t0 = 4.0 * (rng.next_unit() - 0.5);
      double h = 0.05 + rng.next_unit();
      double second = pressure_estimate_kt(cache, t0 + h) +
                      pressure_estimate_kt(cache, t0 - h) -
                      2.0 * pressure_estimate_kt(cache, t0);
      if (second < -1e-8) ++failures;
    }
  }

  // Metric axioms for the weak* distance.
  {
    SplitMix64 rng(7003);
    TestFamily fam = TestFamily::default_family();
    auto random_pairing = [&]() {
      std::vector<double> v(fam.members.size());
      for (double& x : v) x = 4.0 * (rng.next_unit() - 0.5);
      return v;
    };
    for (int it = 0; it < kCases; ++it) {
      auto x = random_pairing(), y = random_pairing(), z = random_pairing();
      if (weakstar_distance(x, x, fam.scales) != 0.0) ++failures;
      if (std::abs(weakstar_distance(x, y, fam.scales) -
                   weakstar_distance(y, x, fam.scales)) > 0.0) {
        ++failures;
      }
      double xz = weakstar_distance(x, z, fam.scales);
      double xy = weakstar_distance(x, y, fam.scales);
      double yz = weakstar_distance(y, z, fam.scales);
      if (xz > xy + yz + 1e-15) ++failures;
    }
  }

  // Chain rule for log-derivative sums.
  {
    SplitMix64 rng(7004);
    for (int it = 0; it < kCases; ++it) {
      MapSpec map = random_map(rng);
      Cx z = sample_julia(map, 1, rng.next())[0];
      int m = 1 + static_cast<int>(rng.next_below(10));
      int n = 1 + static_cast<int>(rng.next_below(10));
      double whole = log_deriv_birkhoff(map, z, m + n);
      double split =
          log_deriv_birkhoff(map, z, m) + log_deriv_birkhoff(map, iterate(map, z, m), n);
      if (std::abs(whole - split) > 1e-12 * (m + n)) ++failures;
    }
  }

  // Determinism under worker-count variation.
  {
    SplitMix64 rng(7005);
    for (int it = 0; it < kCases; ++it) {
      if (rng.next_below(2) == 0) {
        ShiftSpec spec = ShiftSpec::make(2 + static_cast<int>(rng.next_below(2)), 1);
        Box box = Box::line(4 + static_cast<int>(rng.next_below(5)));
        std::vector<double> vals(spec.alphabet);
        for (double& v : vals) v = 4.0 * (rng.next_unit() - 0.5);
        ShiftPotential f = ShiftPotential::single_site(spec.alphabet, vals);
        ShiftEnsemble a = gibbs_weights_shift(spec, box, Extension::Periodic, 0, f, 1);
        ShiftEnsemble b = gibbs_weights_shift(spec, box, Extension::Periodic, 0, f, 3);
        if (a.log_weights != b.log_weights) ++failures;
      } else {
        MapSpec map = random_map(rng);
        int n = 2 + static_cast<int>(rng.next_below(4));
        OrbitSet orbit = preimage_set(map, repelling_fixed_point(map), n);
        MapPotential f = random_poly(rng);
        MapEnsemble a = gibbs_weights(orbit, f, 1);
        MapEnsemble b = gibbs_weights(orbit, f, 3);
        if (a.log_weights != b.log_weights ||
            ensemble_mean(a, MapPotential::re_power(2), 1) !=
                ensemble_mean(b, MapPotential::re_power(2), 4)) {
          ++failures;
        }
      }
    }
  }

  detail = std::to_string(failures) + " failures over 5x" + std::to_string(kCases) +
           " cases";
  return failures == 0;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& filter, int workers) {
  const int w = workers > 0 ? workers : default_workers();
  struct Entry {
    const char* name;
    double limit;
    std::function<bool(std::string&)> body;
  };
  std::vector<Entry> entries{
      {"pressure-powermap-exact", 2.0,
       [w](std::string& d) { return power_pressure_exact(d, w); }},
      {"rate-degenerate-powermap", 0.0,
       [w](std::string& d) { return degenerate_rate(d, w); }},
      {"shift-factorization", 1.0,
       [w](std::string& d) { return shift_factorization(d, w); }},
      {"transfer-nearest-neighbor", 2.0,
       [w](std::string& d) { return transfer_nearest_neighbor(d, w); }},
      {"legendre-duality", 30.0,
       [w](std::string& d) { return legendre_duality(d, w); }},
      {"cramer-binomial", 1.0, [w](std::string& d) { return cramer_binomial(d, w); }},
      {"lyapunov-tail", 10.0, [w](std::string& d) { return lyapunov_tail(d, w); }},
      {"barycenter-convergence", 30.0,
       [w](std::string& d) { return barycenter_convergence_criterion(d, w); }},
      {"mc-birkhoff", 20.0, [w](std::string& d) { return mc_birkhoff(d, w); }},
      {"property-suites", 0.0, [w](std::string& d) { return property_suites(d, w); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos) {
      continue;
    }
    results.push_back(run_one(e.name, e.limit, e.body));
  }
  return results;
}

}  // namespace ratelab

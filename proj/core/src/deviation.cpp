#include "ratelab/deviation.hpp"

#include <cmath>

#include "ratelab/numeric.hpp"
#include "ratelab/rng.hpp"

namespace ratelab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

DeviationReport tail_report(long horizon, double threshold,
                            std::span<const double> terms,
                            const std::function<bool(std::size_t)>& in_event) {
  DeviationReport rep;
  rep.horizon = horizon;
  rep.threshold = threshold;
  rep.estimate = log_sum_exp_if(terms, in_event, &rep.event_count) / horizon;
  rep.empty_event = rep.event_count == 0;
  return rep;
}

}  // namespace

DeviationReport deviation_prob(const MapEnsemble& nu, const MapPotential& k,
                               double center, double eps, int workers) {
  if (!(eps > 0.0)) throw Error("deviation_prob: eps must be positive");
  std::vector<double> pair(nu.points.size());
  if (k.is_kt()) {
    for (std::size_t i = 0; i < pair.size(); ++i) {
      pair[i] = k.t == 0.0 ? 0.0 : -k.t * nu.log_derivs[i] / nu.horizon;
    }
  } else {
    parallel_for(pair.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        pair[i] = birkhoff_sum(nu.map, k, nu.points[i], nu.horizon) / nu.horizon;
      }
    });
  }
  return tail_report(nu.horizon, eps, nu.log_weights, [&](std::size_t i) {
    return std::abs(pair[i] - center) >= eps;
  });
}

DeviationReport deviation_prob_shift(const ShiftEnsemble& nu,
                                     const ShiftPotential& k, double center,
                                     double eps, int workers) {
  if (!(eps > 0.0)) throw Error("deviation_prob_shift: eps must be positive");
  std::size_t count = nu.log_weights.size();
  double vol = static_cast<double>(nu.box.volume());
  std::vector<double> pair(count);
  parallel_for(count, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      BoxConfig cfg = config_at(nu.spec, nu.box, nu.extension, nu.background,
                                static_cast<long>(i));
      pair[i] = birkhoff_sum_shift(k, cfg) / vol;
    }
  });
  return tail_report(nu.box.volume(), eps, nu.log_weights, [&](std::size_t i) {
    return std::abs(pair[i] - center) >= eps;
  });
}

void attach_rate_prediction(DeviationReport& report, const PressureCurve& curve,
                            double t, double center, double eps) {
  double zero = curve_degenerate(curve) ? degenerate_chi(curve) : -dP(curve, t);
  if (std::abs(zero - center) >= eps) {
    report.prediction = 0.0;
    report.prediction_infinite = false;
    return;
  }
  RateValue left = rate_level1(curve, t, center - eps);
  RateValue right = rate_level1(curve, t, center + eps);
  if (left.infinite && right.infinite) {
    report.prediction = -std::numeric_limits<double>::max();
    report.prediction_infinite = true;
    return;
  }
  double best = std::numeric_limits<double>::max();
  if (!left.infinite) best = std::min(best, left.value);
  if (!right.infinite) best = std::min(best, right.value);
  report.prediction = -best;
  report.prediction_infinite = false;
}

DeviationReport lyapunov_tail_weighted(const OrbitDerivCache& cache, double t,
                                       double x, TailSide side) {
  std::vector<double> terms(cache.log_derivs.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = t == 0.0 ? 0.0 : -t * cache.log_derivs[i];
  }
  double n = static_cast<double>(cache.horizon);
  DeviationReport rep =
      tail_report(cache.horizon, x, terms, [&](std::size_t i) {
        double avg = cache.log_derivs[i] / n;
        return side == TailSide::Above ? avg >= x : avg <= x;
      });
  return rep;
}

DeviationReport entropy_by_counting(const OrbitDerivCache& cache, double x,
                                    TailSide side) {
  return lyapunov_tail_weighted(cache, 0.0, x, side);
}

void attach_tail_prediction(DeviationReport& report, const PressureCurve& curve,
                            double t, double x, TailSide side) {
  if (curve_degenerate(curve)) {
    // P is affine, so h_{mu_s} = P(s) - s P'(s) is the intercept (= log d)
    // for every s.
    double chi = degenerate_chi(curve);
    double intercept = curve.P.front() + chi * curve.t.front();
    report.prediction = intercept - t * x;
    report.prediction_valid = std::abs(x - chi) <= 1e-9;
    return;
  }
  double s = solve_s_x(curve, x);
  report.prediction = entropy_of_s(curve, s) - t * x;
  report.prediction_valid = side == TailSide::Above ? s <= t + 1e-9 : s >= t - 1e-9;
}

DeviationReport entropy_by_ball_counting(const OrbitSet& orbit,
                                         const ReferenceMeasure& reference,
                                         double eps, const TestFamily& fam,
                                         const MapPotential& f,
                                         double ref_f_mean, int workers) {
  std::size_t count = orbit.points.size();
  std::vector<double> sums(count);
  std::vector<char> in_ball(count, 0);
  parallel_for(count, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      sums[i] = birkhoff_sum(orbit.map, f, orbit.points[i], orbit.horizon);
      std::vector<double> p = pairings(orbit.map, fam, orbit.points[i], orbit.horizon);
      double d = weakstar_distance(p, reference.values, fam.scales);
      in_ball[i] = d < eps ? 1 : 0;
    }
  });
  DeviationReport rep = tail_report(orbit.horizon, eps, sums,
                                    [&](std::size_t i) { return in_ball[i] != 0; });
  if (!rep.empty_event) rep.estimate -= ref_f_mean;
  return rep;
}

DeviationReport entropy_by_ball_counting_shift(
    const ShiftSpec& spec, const Box& box, Extension ext,
    std::uint8_t background, const ReferenceMeasure& reference, double eps,
    const ShiftTestFamily& fam, const ShiftPotential& f, double ref_f_mean,
    int workers) {
  long count = config_count(spec, box);
  std::vector<double> sums(static_cast<std::size_t>(count));
  std::vector<char> in_ball(static_cast<std::size_t>(count), 0);
  parallel_for(static_cast<std::size_t>(count), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   BoxConfig cfg = config_at(spec, box, ext, background,
                                             static_cast<long>(i));
                   sums[i] = birkhoff_sum_shift(f, cfg);
                   std::vector<double> p = shift_pairings(fam, cfg);
                   double d = weakstar_distance(p, reference.values, fam.scales);
                   in_ball[i] = d < eps ? 1 : 0;
                 }
               });
  DeviationReport rep = tail_report(box.volume(), eps, sums,
                                    [&](std::size_t i) { return in_ball[i] != 0; });
  if (!rep.empty_event) rep.estimate -= ref_f_mean;
  return rep;
}

namespace {

// Uniform unit-circle samples from per-index SplitMix64 substreams: sample j
// is a pure function of (seed, j), so worker partitioning cannot change the
// stream.
Cx circle_sample(std::uint64_t seed, long j) {
  double theta = kTwoPi * SplitMix64::unit_at(seed, static_cast<std::uint64_t>(j));
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

McEstimate mc_birkhoff_reference(const MapSpec& map, int n, long samples,
                                 std::uint64_t seed, const MapPotential& g,
                                 int workers) {
  if (map.family != MapFamily::Power) {
    throw Error("mc_birkhoff_reference: power maps only (mu_0 sampled in closed form)");
  }
  std::vector<double> sums(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   Cx y = circle_sample(seed, static_cast<long>(i));
                   sums[i] = birkhoff_sum(map, g, y, n);
                 }
               });
  double lse = log_sum_exp(sums);
  double log_n = std::log(static_cast<double>(samples));
  double value = (lse - log_n) / n;
  // Delta method: var(log mean) ~ (E X^2 / (E X)^2 - 1) / N with X = e^{S}.
  std::vector<double> twice(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) twice[i] = 2.0 * sums[i];
  double lse2 = log_sum_exp(twice);
  double ratio = std::exp((lse2 - log_n) - 2.0 * (lse - log_n));
  double se = std::sqrt(std::max(0.0, ratio - 1.0) / static_cast<double>(samples)) / n;
  return McEstimate{value, se, n, samples};
}

DeviationReport mc_lyap_tail_prob(const MapSpec& map, int n, long samples,
                                  std::uint64_t seed, double x, TailSide side,
                                  int workers) {
  if (map.family != MapFamily::Power) {
    throw Error("mc_lyap_tail_prob: power maps only");
  }
  std::vector<char> hit(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   Cx y = circle_sample(seed, static_cast<long>(i));
                   double avg = log_deriv_birkhoff(map, y, n) / n;
                   bool in = side == TailSide::Above ? avg >= x : avg <= x;
                   hit[i] = in ? 1 : 0;
                 }
               });
  DeviationReport rep;
  rep.horizon = n;
  rep.threshold = x;
  long count = 0;
  for (char h : hit) count += h;
  rep.event_count = count;
  rep.empty_event = count == 0;
  rep.estimate = count == 0
                     ? kNegInf
                     : std::log(static_cast<double>(count) /
                                static_cast<double>(samples)) / n;
  return rep;
}

DeviationReport mc_lyap_deviation_prob(const MapSpec& map, int n, long samples,
                                       std::uint64_t seed, double center,
                                       double eps, int workers) {
  if (map.family != MapFamily::Power) {
    throw Error("mc_lyap_deviation_prob: power maps only");
  }
  std::vector<char> hit(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   Cx y = circle_sample(seed, static_cast<long>(i));
                   double avg = log_deriv_birkhoff(map, y, n) / n;
                   hit[i] = std::abs(avg - center) >= eps ? 1 : 0;
                 }
               });
  DeviationReport rep;
  rep.horizon = n;
  rep.threshold = eps;
  long count = 0;
  for (char h : hit) count += h;
  rep.event_count = count;
  rep.empty_event = count == 0;
  rep.estimate = count == 0
                     ? kNegInf
                     : std::log(static_cast<double>(count) /
                                static_cast<double>(samples)) / n;
  return rep;
}

DeviationReport mc_ball_prob(const MapSpec& map, int n, long samples,
                             std::uint64_t seed,
                             const ReferenceMeasure& reference, double eps,
                             const TestFamily& fam, int workers) {
  if (map.family != MapFamily::Power) {
    throw Error("mc_ball_prob: power maps only");
  }
  std::vector<char> hit(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   Cx y = circle_sample(seed, static_cast<long>(i));
                   std::vector<double> p = pairings(map, fam, y, n);
                   hit[i] = weakstar_distance(p, reference.values, fam.scales) < eps
                                ? 1
                                : 0;
                 }
               });
  DeviationReport rep;
  rep.horizon = n;
  rep.threshold = eps;
  long count = 0;
  for (char h : hit) count += h;
  rep.event_count = count;
  rep.empty_event = count == 0;
  rep.estimate = count == 0
                     ? kNegInf
                     : std::log(static_cast<double>(count) /
                                static_cast<double>(samples)) / n;
  return rep;
}

std::vector<BarycenterRow> barycenter_convergence(
    const MapSpec& map, OrbitMethod method, const MapPotential& f,
    const std::vector<int>& horizons, const TestFamily& battery,
    const PressureCurve* curve, const SeparatedParams& sep, int workers) {
  if (horizons.size() < 2) {
    throw Error("barycenter_convergence: need at least 2 horizons");
  }
  std::vector<BarycenterRow> rows;
  const MapPotential klog = MapPotential::kt(-1.0);  // log|T'|
  for (int n : horizons) {
    OrbitSet orbit = build_orbit(map, method, n, sep);
    MapEnsemble nu = gibbs_weights(orbit, f, workers);
    BarycenterRow row;
    row.horizon = n;
    row.atoms = nu.size();
    row.klog_mean = ensemble_mean(nu, klog, workers);
    for (const auto& g : battery.members) {
      row.means.push_back(ensemble_mean(nu, g, workers));
    }
    row.succ_diff = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty()) {
      double d = std::abs(row.klog_mean - rows.back().klog_mean);
      for (std::size_t j = 0; j < row.means.size(); ++j) {
        d = std::max(d, std::abs(row.means[j] - rows.back().means[j]));
      }
      row.succ_diff = d;
    }
    row.gap = std::numeric_limits<double>::quiet_NaN();
    if (curve != nullptr && f.is_kt()) {
      double chi = curve_degenerate(*curve) ? degenerate_chi(*curve)
                                            : -dP(*curve, f.t);
      row.gap = std::abs(row.klog_mean - chi);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ShiftBarycenterRow> barycenter_convergence_shift(
    const ShiftSpec& spec, const std::vector<Box>& boxes, Extension ext,
    std::uint8_t background, const ShiftPotential& f,
    const ShiftTestFamily& battery, int workers) {
  if (boxes.size() < 2) {
    throw Error("barycenter_convergence_shift: need at least 2 boxes");
  }
  std::vector<ShiftBarycenterRow> rows;
  for (const Box& box : boxes) {
    ShiftEnsemble nu = gibbs_weights_shift(spec, box, ext, background, f, workers);
    ShiftBarycenterRow row;
    row.horizon = box.volume();
    row.atoms = nu.size();
    for (const auto& g : battery.members) {
      row.means.push_back(ensemble_mean_shift(nu, g, workers));
    }
    row.succ_diff = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty()) {
      double d = 0.0;
      for (std::size_t j = 0; j < row.means.size(); ++j) {
        d = std::max(d, std::abs(row.means[j] - rows.back().means[j]));
      }
      row.succ_diff = d;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ratelab

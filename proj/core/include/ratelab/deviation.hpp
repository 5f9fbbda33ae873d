#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratelab/gibbs.hpp"
#include "ratelab/ratefn.hpp"

namespace ratelab {

enum class TailSide { Above, Below };

// One deviation / tail / counting estimate at a fixed horizon, optionally
// paired with the rate-function prediction for its exponential scale.
struct DeviationReport {
  long horizon = 0;
  double threshold = 0.0;  // eps or x, depending on the estimator
  double estimate = 0.0;   // (1/n) log(weight, count, or weighted sum)
  bool empty_event = false;
  long event_count = 0;
  double prediction = std::numeric_limits<double>::quiet_NaN();
  bool prediction_infinite = false;
  // Side-validity of an attached tail prediction (s <= t / s >= t rule).
  bool prediction_valid = true;
  double gap() const { return estimate - prediction; }
};

// (1/n) log of the ensemble weight of {atoms : |mu_{y,n}(k) - center| >= eps}.
DeviationReport deviation_prob(const MapEnsemble& nu, const MapPotential& k,
                               double center, double eps, int workers = 1);
DeviationReport deviation_prob_shift(const ShiftEnsemble& nu,
                                     const ShiftPotential& k, double center,
                                     double eps, int workers = 1);

// Rate-function prediction for a two-sided deviation of k_{-1}-averages:
// -inf over {|x - center| >= eps} of I^{k_t}_{k_{-1}}, i.e. 0 if the zero of
// the rate lies in the tail set, else -min(I(center-eps), I(center+eps)).
void attach_rate_prediction(DeviationReport& report, const PressureCurve& curve,
                            double t, double center, double eps);

// (1/n) log sum over the tail {y : L_n(y)/n >= x} (resp. <=) of
// |(T^n)'(y)|^{-t}, with L_n = log|(T^n)'|. Unnormalized.
DeviationReport lyapunov_tail_weighted(const OrbitDerivCache& cache, double t,
                                       double x, TailSide side);

// t = 0 specialization: (1/n) log Card of the tail set.
DeviationReport entropy_by_counting(const OrbitDerivCache& cache, double x,
                                    TailSide side);

// Attaches the prediction h_{mu_{s_x}} - t x; prediction_valid records the
// side rule (Above requires s_x <= t, Below requires s_x >= t).
void attach_tail_prediction(DeviationReport& report, const PressureCurve& curve,
                            double t, double x, TailSide side);

// (1/n) log sum of e^{S_n(f)(y)} over {y : rho(mu_{y,n}, reference) < eps}
// minus the reference mean of f. With f = 0 this is the pure counting form.
DeviationReport entropy_by_ball_counting(const OrbitSet& orbit,
                                         const ReferenceMeasure& reference,
                                         double eps, const TestFamily& fam,
                                         const MapPotential& f,
                                         double ref_f_mean, int workers = 1);
DeviationReport entropy_by_ball_counting_shift(
    const ShiftSpec& spec, const Box& box, Extension ext,
    std::uint8_t background, const ReferenceMeasure& reference, double eps,
    const ShiftTestFamily& fam, const ShiftPotential& f, double ref_f_mean,
    int workers = 1);

// Monte Carlo Birkhoff-average reference against the maximal-entropy measure
// of a power map (uniform on the unit circle, sampled directly).
struct McEstimate {
  double value;      // (1/n) log[(1/N) sum e^{S_n(g)}]
  double std_error;  // delta-method error of `value`
  int horizon;
  long samples;
};

McEstimate mc_birkhoff_reference(const MapSpec& map, int n, long samples,
                                 std::uint64_t seed, const MapPotential& g,
                                 int workers = 1);

// (1/n) log mu_0{y : L_n(y)/n >= x} (resp. <=), estimated by Monte Carlo.
DeviationReport mc_lyap_tail_prob(const MapSpec& map, int n, long samples,
                                  std::uint64_t seed, double x, TailSide side,
                                  int workers = 1);

// Two-sided variant: (1/n) log mu_0{y : |L_n(y)/n - center| >= eps}.
DeviationReport mc_lyap_deviation_prob(const MapSpec& map, int n, long samples,
                                       std::uint64_t seed, double center,
                                       double eps, int workers = 1);

// (1/n) log mu_0{y : rho(mu_{y,n}, reference) < eps}.
DeviationReport mc_ball_prob(const MapSpec& map, int n, long samples,
                             std::uint64_t seed,
                             const ReferenceMeasure& reference, double eps,
                             const TestFamily& fam, int workers = 1);

// Ensemble barycenter means against a test battery across horizons, plus
// the k_{-1}-mean and (when a curve is supplied and f = k_t) the gap to
// -dP(t).
struct BarycenterRow {
  long horizon;
  long atoms;
  double klog_mean;            // barycenter pairing with log|T'|
  std::vector<double> means;   // battery pairings
  double succ_diff;            // max change from the previous horizon; NaN first
  double gap;                  // |klog_mean - (-dP(t))|; NaN without a curve
};

std::vector<BarycenterRow> barycenter_convergence(
    const MapSpec& map, OrbitMethod method, const MapPotential& f,
    const std::vector<int>& horizons, const TestFamily& battery,
    const PressureCurve* curve = nullptr, const SeparatedParams& sep = {},
    int workers = 1);

struct ShiftBarycenterRow {
  long horizon;
  long atoms;
  std::vector<double> means;  // battery pairings
  double succ_diff;
};

std::vector<ShiftBarycenterRow> barycenter_convergence_shift(
    const ShiftSpec& spec, const std::vector<Box>& boxes, Extension ext,
    std::uint8_t background, const ShiftPotential& f,
    const ShiftTestFamily& battery, int workers = 1);

}  // namespace ratelab

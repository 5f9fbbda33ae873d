#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "ratelab/pressure.hpp"

namespace ratelab {

// A rate value; +infinity is carried as a flag with the largest finite
// double as sentinel, and is never consumed by arithmetic.
struct RateValue {
  double value;
  bool infinite;

  static RateValue finite(double v) { return {v, false}; }
  static RateValue inf() { return {std::numeric_limits<double>::max(), true}; }
};

// P evaluated off-grid through the centered 5-point Lagrange quartic around
// the nearest usable node. Domain: [t_2, t_{K-3}] (two-node margin).
double curve_eval(const PressureCurve& curve, double t);

// Derivative of the same local quartic. At grid nodes this reduces to the
// central difference with one Richardson extrapolation level,
// (8(P_1 - P_{-1}) - (P_2 - P_{-2})) / (12h).
double dP(const PressureCurve& curve, double t);

// Affine within 1e-7 (max second difference): the strictly convex branch is
// empty. True for power maps, whose estimated curve is affine to rounding.
bool curve_degenerate(const PressureCurve& curve);

// Slope-derived Lyapunov constant -slope for a degenerate curve.
double degenerate_chi(const PressureCurve& curve);

// Admissible open interval of Lyapunov values (chi_lo, chi_hi): the grid
// estimates of chi_inf/chi_sup pulled in by two grid steps, outside which
// rate evaluation refuses (the rate is +infinity there anyway).
std::pair<double, double> chi_range(const PressureCurve& curve);

// h_{mu_s} = P(s) - s P'(s).
double entropy_of_s(const PressureCurve& curve, double s);

// The unique s with -P'(s) = x, by bisection on the nonincreasing map
// s -> -dP(s) over the usable grid. Throws OutOfRange outside chi_range
// (signals I = +infinity) and DegenerateCurve on affine curves.
double solve_s_x(const PressureCurve& curve, double x);

// Level-1 Lyapunov rate function x -> P(t) + t x - h_{mu_{s_x}}.
// Degenerate curves: 0 at x = -slope (within 1e-9), +infinity elsewhere.
RateValue rate_level1(const PressureCurve& curve, double t, double x);

// sup_s { s x - (P(t-s) - P(t)) } by golden-section on the concave
// objective, refined by bisection on its derivative. Agrees with
// rate_level1 on the interior (Legendre duality).
RateValue legendre_sup(const PressureCurve& curve, double t, double x);

// A tractable invariant measure carrying a closed-form entropy.
struct RateLevel2Input {
  enum class Kind { MuS, Bernoulli, Markov };
  Kind kind;
  double s = 0.0;
  const PressureCurve* curve = nullptr;          // MuS
  std::vector<double> probs;                     // Bernoulli
  std::vector<std::vector<double>> transition;   // Markov, row-stochastic

  static RateLevel2Input mu_s(const PressureCurve& curve, double s);
  static RateLevel2Input bernoulli(std::vector<double> probs);
  static RateLevel2Input markov(std::vector<std::vector<double>> transition);
};

// Closed-form entropy: h_{mu_s} via entropy_of_s; Bernoulli -sum p log p;
// Markov -sum pi_i P_ij log P_ij with pi the stationary row vector.
// Validates stochasticity to 1e-12.
double invariant_entropy(const RateLevel2Input& mu);

// Level-2 rate P(f) - mu(f) - h_mu. Throws NegativeRate below -1e-6.
double rate_level2(double pressure, const RateLevel2Input& mu, double f_mean);

}  // namespace ratelab

#include "ratelab/ratefn.hpp"

#include <algorithm>
#include <cmath>

namespace ratelab {

namespace {

// Lagrange quartic through nodes {-2,...,2}, expanded coefficients.
// L_j(x) = (a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0) with the rows below.
constexpr double kL[5][5] = {
    // a0, a1, a2, a3, a4
    {0.0, 2.0 / 24, -1.0 / 24, -2.0 / 24, 1.0 / 24},     // j = -2
    {0.0, -4.0 / 6, 4.0 / 6, 1.0 / 6, -1.0 / 6},          // j = -1
    {1.0, 0.0, -5.0 / 4, 0.0, 1.0 / 4},                   // j = 0
    {0.0, 4.0 / 6, 4.0 / 6, -1.0 / 6, -1.0 / 6},          // j = +1
    {0.0, -2.0 / 24, -1.0 / 24, 2.0 / 24, 1.0 / 24},      // j = +2
};

struct Stencil {
  int center;   // node index k, clamped to [2, K-3]
  double xi;    // (t - t_k) / h
};

Stencil locate(const PressureCurve& c, double t) {
  const int K = c.size();
  if (K < 5) throw OutOfDomain("curve: fewer than 5 grid points");
  double lo = c.t[2], hi = c.t[K - 3];
  if (t < lo - 1e-12 || t > hi + 1e-12) {
    throw OutOfDomain("curve evaluation at t outside the usable grid");
  }
  int k = static_cast<int>(std::lround((t - c.t[0]) / c.spacing));
  k = std::clamp(k, 2, K - 3);
  return Stencil{k, (t - c.t[k]) / c.spacing};
}

double stencil_value(const PressureCurve& c, const Stencil& s) {
  double v = 0.0;
  for (int j = -2; j <= 2; ++j) {
    const double* a = kL[j + 2];
    double x = s.xi;
    double basis = a[0] + x * (a[1] + x * (a[2] + x * (a[3] + x * a[4])));
    v += c.P[s.center + j] * basis;
  }
  return v;
}

double stencil_derivative(const PressureCurve& c, const Stencil& s) {
  double v = 0.0;
  for (int j = -2; j <= 2; ++j) {
    const double* a = kL[j + 2];
    double x = s.xi;
    double basis = a[1] + x * (2.0 * a[2] + x * (3.0 * a[3] + x * 4.0 * a[4]));
    v += c.P[s.center + j] * basis;
  }
  return v / c.spacing;
}

// Usable t-interval for curve_eval / dP.
std::pair<double, double> usable(const PressureCurve& c) {
  return {c.t[2], c.t[c.size() - 3]};
}

}  // namespace

double curve_eval(const PressureCurve& curve, double t) {
  return stencil_value(curve, locate(curve, t));
}

double dP(const PressureCurve& curve, double t) {
  return stencil_derivative(curve, locate(curve, t));
}

bool curve_degenerate(const PressureCurve& curve) {
  double worst = 0.0;
  for (int k = 1; k + 1 < curve.size(); ++k) {
    worst = std::max(worst,
                     std::abs(curve.P[k + 1] - 2.0 * curve.P[k] + curve.P[k - 1]));
  }
  return worst <= 1e-7;
}

double degenerate_chi(const PressureCurve& curve) {
  return -(curve.P.back() - curve.P.front()) /
         (curve.t.back() - curve.t.front());
}

std::pair<double, double> chi_range(const PressureCurve& curve) {
  const int K = curve.size();
  if (K < 9) throw OutOfDomain("chi_range: need at least 9 grid points");
  // chi = -P' is nonincreasing in t, so the top of the range sits at the low
  // end of the grid. Two extra nodes of margin on each side.
  double hi = -dP(curve, curve.t[4]);
  double lo = -dP(curve, curve.t[K - 5]);
  return {lo, hi};
}

double entropy_of_s(const PressureCurve& curve, double s) {
  return curve_eval(curve, s) - s * dP(curve, s);
}

double solve_s_x(const PressureCurve& curve, double x) {
  if (curve_degenerate(curve)) {
    throw DegenerateCurve("solve_s_x: affine pressure curve");
  }
  auto [chi_lo, chi_hi] = chi_range(curve);
  if (!(x > chi_lo && x < chi_hi)) {
    throw OutOfRange("solve_s_x: x outside (chi_inf, chi_sup) margins");
  }
  auto [lo, hi] = usable(curve);
  // chi(s) = -dP(s) is nonincreasing; g(s) = chi(s) - x changes sign on
  // [lo, hi] because x is strictly inside the margin interval.
  double a = lo, b = hi;
  double ga = -dP(curve, a) - x;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (a + b);
    double gm = -dP(curve, mid) - x;
    if (std::abs(gm) <= 1e-9 && (b - a) <= 1e-10) return mid;
    if ((ga >= 0.0) == (gm >= 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
    if (b - a <= 1e-14) break;
  }
  return 0.5 * (a + b);
}

RateValue rate_level1(const PressureCurve& curve, double t, double x) {
  if (curve_degenerate(curve)) {
    return std::abs(x - degenerate_chi(curve)) <= 1e-9 ? RateValue::finite(0.0)
                                                       : RateValue::inf();
  }
  double s;
  try {
    s = solve_s_x(curve, x);
  } catch (const OutOfRange&) {
    return RateValue::inf();
  }
  double value = curve_eval(curve, t) + t * x - entropy_of_s(curve, s);
  return RateValue::finite(value);
}

RateValue legendre_sup(const PressureCurve& curve, double t, double x) {
  if (curve_degenerate(curve)) {
    return std::abs(x - degenerate_chi(curve)) <= 1e-9 ? RateValue::finite(0.0)
                                                       : RateValue::inf();
  }
  auto [ulo, uhi] = usable(curve);
  if (t < ulo || t > uhi) throw OutOfDomain("legendre_sup: t outside grid");
  const double pt = curve_eval(curve, t);
  auto objective = [&](double s) {
    return s * x - (curve_eval(curve, t - s) - pt);
  };
  // u = t - s ranges over the usable grid.
  double a = t - uhi, b = t - ulo;

  // Golden-section on the concave objective.
  constexpr double kInvPhi = 0.6180339887498949;
  double c1 = b - kInvPhi * (b - a);
  double c2 = a + kInvPhi * (b - a);
  double f1 = objective(c1), f2 = objective(c2);
  for (int iter = 0; iter < 90 && (b - a) > 1e-11; ++iter) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + kInvPhi * (b - a);
      f2 = objective(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - kInvPhi * (b - a);
      f1 = objective(c1);
    }
  }

  // Refine with bisection on the derivative x + P'(t-s) (nonincreasing in s)
  // when a sign change brackets the stationary point.
  double ra = std::max(t - uhi, a - 1e-6), rb = std::min(t - ulo, b + 1e-6);
  auto slope = [&](double s) { return x + dP(curve, t - s); };
  double sa = slope(ra), sb = slope(rb);
  double s_best = 0.5 * (a + b);
  if ((sa >= 0.0) != (sb >= 0.0)) {
    for (int iter = 0; iter < 120; ++iter) {
      double mid = 0.5 * (ra + rb);
      double sm = slope(mid);
      if ((sa >= 0.0) == (sm >= 0.0)) {
        ra = mid;
        sa = sm;
      } else {
        rb = mid;
        sb = sm;
      }
      if (rb - ra <= 1e-13) break;
    }
    s_best = 0.5 * (ra + rb);
  }
  double v1 = objective(s_best);
  double v2 = std::max(objective(a), objective(b));
  return RateValue::finite(std::max(v1, v2));
}

RateLevel2Input RateLevel2Input::mu_s(const PressureCurve& curve, double s) {
  RateLevel2Input in;
  in.kind = Kind::MuS;
  in.curve = &curve;
  in.s = s;
  return in;
}

RateLevel2Input RateLevel2Input::bernoulli(std::vector<double> probs) {
  RateLevel2Input in;
  in.kind = Kind::Bernoulli;
  in.probs = std::move(probs);
  return in;
}

RateLevel2Input RateLevel2Input::markov(std::vector<std::vector<double>> transition) {
  RateLevel2Input in;
  in.kind = Kind::Markov;
  in.transition = std::move(transition);
  return in;
}

namespace {

void check_stochastic(const std::vector<double>& row, const char* what) {
  double sum = 0.0;
  for (double p : row) {
    if (p < -1e-15) throw Error(std::string(what) + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(std::string(what) + ": probabilities sum to " + std::to_string(sum));
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& P) {
  std::size_t n = P.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += pi[i] * P[i][j];
      next[j] = s;
    }
    double diff = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      diff = std::max(diff, std::abs(next[j] - pi[j]));
      norm += next[j];
    }
    for (std::size_t j = 0; j < n; ++j) pi[j] = next[j] / norm;
    if (diff <= 1e-13) return pi;
  }
  throw NonConvergence("stationary distribution: power iteration stalled");
}

}  // namespace

double invariant_entropy(const RateLevel2Input& mu) {
  switch (mu.kind) {
    case RateLevel2Input::Kind::MuS:
      return entropy_of_s(*mu.curve, mu.s);
    case RateLevel2Input::Kind::Bernoulli: {
      check_stochastic(mu.probs, "bernoulli");
      double h = 0.0;
      for (double p : mu.probs) h -= plogp(p);
      return h;
    }
    case RateLevel2Input::Kind::Markov: {
      for (const auto& row : mu.transition) {
        if (row.size() != mu.transition.size()) {
          throw Error("markov: transition matrix must be square");
        }
        check_stochastic(row, "markov");
      }
      std::vector<double> pi = stationary_distribution(mu.transition);
      double h = 0.0;
      for (std::size_t i = 0; i < pi.size(); ++i) {
        for (double pij : mu.transition[i]) h -= pi[i] * plogp(pij);
      }
      return h;
    }
  }
  throw Error("invariant_entropy: unknown input kind");
}

double rate_level2(double pressure, const RateLevel2Input& mu, double f_mean) {
  double rate = pressure - f_mean - invariant_entropy(mu);
  if (rate < -1e-6) {
    throw NegativeRate("rate_level2: value " + std::to_string(rate) +
                       " below -1e-6; inconsistent inputs");
  }
  return rate;
}

}  // namespace ratelab

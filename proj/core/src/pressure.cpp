#include "ratelab/pressure.hpp"

#include <cmath>

#include "ratelab/numeric.hpp"

namespace ratelab {

PressureEstimate pressure_estimate(const OrbitSet& orbit, const MapPotential& pot,
                                   int workers) {
  if (orbit.points.empty()) throw Error("pressure_estimate: empty orbit set");
  std::vector<double> sums(orbit.points.size());
  if (pot.is_kt()) {
    OrbitDerivCache cache = cache_log_derivs(orbit, workers);
    for (std::size_t i = 0; i < sums.size(); ++i) {
      if (cache.log_derivs[i] == kNegInf && pot.t != 0.0) {
        throw DerivativeVanishes("pressure_estimate: orbit through critical point");
      }
      sums[i] = pot.t == 0.0 ? 0.0 : -pot.t * cache.log_derivs[i];
    }
  } else {
    parallel_for(sums.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        sums[i] = birkhoff_sum(orbit.map, pot, orbit.points[i], orbit.horizon);
      }
    });
  }
  double lse = log_sum_exp(sums);
  return PressureEstimate{lse / orbit.horizon, orbit.horizon,
                          orbit_method_name(orbit.method)};
}

double pressure_estimate_kt(const OrbitDerivCache& cache, double t) {
  std::vector<double> sums(cache.log_derivs.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    sums[i] = t == 0.0 ? 0.0 : -t * cache.log_derivs[i];
  }
  return log_sum_exp(sums) / cache.horizon;
}

PressureEstimate shift_pressure_estimate(const ShiftSpec& spec, const Box& box,
                                         const ShiftPotential& pot,
                                         Extension ext, std::uint8_t background,
                                         int workers) {
  long count = config_count(spec, box);
  std::vector<double> sums(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   BoxConfig cfg = config_at(spec, box, ext, background,
                                             static_cast<long>(i));
                   sums[i] = birkhoff_sum_shift(pot, cfg);
                 }
               });
  double lse = log_sum_exp(sums);
  return PressureEstimate{lse / box.volume(), box.volume(),
                          ext == Extension::Periodic ? "periodic-config"
                                                     : "padded-config"};
}

double transfer_matrix_pressure(const ShiftSpec& spec, const ShiftPotential& pot) {
  if (spec.dim != 1) {
    throw Error("transfer_matrix_pressure: one-dimensional shifts only");
  }
  int lo = 0, hi = 0;
  for (const auto& w : pot.window) {
    lo = std::min(lo, w[0]);
    hi = std::max(hi, w[0]);
  }
  int range = hi - lo + 1;
  long states = 1;
  for (int i = 0; i < range; ++i) {
    states *= spec.alphabet;
    if (states > (1L << 14)) {
      throw CapExceeded("transfer matrix: m^r exceeds 2^14");
    }
  }

  // State u encodes the word (s_0, ..., s_{r-1}) with s_i the symbol at
  // relative position i, digit i carrying weight m^i. Pressure is invariant
  // under translating the window, so offsets are rebased at `lo`.
  const int m = spec.alphabet;
  std::vector<long> digit_weight(range, 1);
  for (int i = 1; i < range; ++i) digit_weight[i] = digit_weight[i - 1] * m;

  std::vector<double> f_of_state(static_cast<std::size_t>(states));
  for (long u = 0; u < states; ++u) {
    std::size_t idx = 0, stride = 1;
    for (const auto& w : pot.window) {
      int pos = w[0] - lo;
      int sym = static_cast<int>((u / digit_weight[pos]) % m);
      idx += static_cast<std::size_t>(sym) * stride;
      stride *= m;
    }
    f_of_state[static_cast<std::size_t>(u)] = pot.table[idx];
  }

  // (Mv)_u = e^{f(u)} sum_s v[successor(u, s)], successor = drop the first
  // symbol, append s. M is primitive (de Bruijn structure), so power
  // iteration converges to the Perron eigenvalue.
  std::vector<double> weight(static_cast<std::size_t>(states));
  for (long u = 0; u < states; ++u) {
    weight[static_cast<std::size_t>(u)] = std::exp(f_of_state[static_cast<std::size_t>(u)]);
  }
  std::vector<double> v(static_cast<std::size_t>(states), 1.0), mv(v.size());
  const long top = digit_weight[range - 1];
  double prev_est = -1e300;
  constexpr int kMaxIters = 100000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    for (long u = 0; u < states; ++u) {
      // Successor words drop the least significant digit and append s at the
      // top: v index = u/m + s * m^{r-1}.
      long tail = u / m;
      double sum = 0.0;
      for (int s = 0; s < m; ++s) {
        sum += v[static_cast<std::size_t>(tail + s * top)];
      }
      mv[static_cast<std::size_t>(u)] = weight[static_cast<std::size_t>(u)] * sum;
    }
    // Rayleigh ratio against the previous (positive) iterate.
    KahanSum num, den;
    for (std::size_t i = 0; i < v.size(); ++i) {
      num.add(mv[i] * v[i]);
      den.add(v[i] * v[i]);
    }
    double est = num.value() / den.value();
    double norm = 0.0;
    for (double x : mv) norm = std::max(norm, std::abs(x));
    if (norm == 0.0) throw NonConvergence("transfer matrix: zero iterate");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mv[i] / norm;
    if (iter >= 2 && std::abs(est - prev_est) <= 1e-12 * std::abs(est)) {
      return std::log(est);
    }
    prev_est = est;
  }
  throw NonConvergence("transfer matrix: power iteration exceeded 1e5 sweeps");
}

PressureCurve PressureCurve::from_samples(std::vector<double> t,
                                          std::vector<double> P,
                                          std::string source) {
  if (t.size() != P.size()) throw Error("PressureCurve: size mismatch");
  if (t.size() < 5) throw Error("PressureCurve: need at least 5 grid points");
  double h = t[1] - t[0];
  if (!(h > 0.0)) throw Error("PressureCurve: grid must be strictly increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw Error("PressureCurve: grid must be uniform");
    }
  }
  PressureCurve c;
  c.t = std::move(t);
  c.P = std::move(P);
  c.spacing = h;
  c.source = std::move(source);
  return c;
}

PressureCurve pressure_curve(const OrbitDerivCache& cache,
                             const std::vector<double>& t_grid, int workers) {
  std::vector<double> values(t_grid.size());
  parallel_for(t_grid.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      values[i] = pressure_estimate_kt(cache, t_grid[i]);
    }
  });
  return PressureCurve::from_samples(
      t_grid, std::move(values),
      cache.map.label() + "/" + orbit_method_name(cache.method) + "/n=" +
          std::to_string(cache.horizon));
}

PressureCurve pressure_curve(const MapSpec& map, OrbitMethod method, int n,
                             const std::vector<double>& t_grid,
                             const SeparatedParams& sep, int workers) {
  OrbitSet orbit = build_orbit(map, method, n, sep);
  OrbitDerivCache cache = cache_log_derivs(orbit, workers);
  return pressure_curve(cache, t_grid, workers);
}

std::vector<double> default_t_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) grid.push_back(-3.0 + 0.05 * i);
  return grid;
}

}  // namespace ratelab

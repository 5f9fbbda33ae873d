#include "ratelab/orbitsets.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ratelab/rng.hpp"

namespace ratelab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long kOrbitCap = 1L << 22;

long checked_pow(int d, int n) {
  long v = 1;
  for (int i = 0; i < n; ++i) {
    v *= d;
    if (v > kOrbitCap) {
      throw CapExceeded("orbit set of size " + std::to_string(d) + "^" +
                        std::to_string(n) + " exceeds the 2^22 cap");
    }
  }
  return v;
}

std::uint64_t grid_key(double re, double im, double cell) {
  auto cx = static_cast<std::int64_t>(std::floor(re / cell)) + (1 << 30);
  auto cy = static_cast<std::int64_t>(std::floor(im / cell)) + (1 << 30);
  return (static_cast<std::uint64_t>(cx) << 32) ^
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
}

// ---- exponent-tracked evaluation of T^n(z) - z ------------------------------
//
// Orbits of points off the Julia set blow up doubly exponentially in n, far
// past double range (|T^12| ~ 1e136 already on |z| = 1 for c = 0.1), so the
// Newton ratio (T^n(z) - z) / ((T^n)'(z) - 1) is evaluated with mantissas
// kept in a wide band and power-of-two exponents carried separately. Two
// regimes: e == 0 while the orbit is representable, e > 0 once it escapes
// (where +c is below double resolution and is skipped).

struct NewtonEval {
  Cx ratio;        // (T^n(z) - z) / ((T^n)'(z) - 1)
  double residual; // |T^n(z) - z|, clamped to 1e300 when astronomically large
};

NewtonEval periodic_newton_eval(Cx c, Cx z, int n) {
  Cx wm = z;
  long we = 0;
  Cx dm{1.0, 0.0};
  long de = 0;
  for (int i = 0; i < n; ++i) {
    // Chain-rule factor T'(w) = 2w, accumulated before stepping.
    dm *= 2.0 * wm;
    de += we;
    double da = std::max(std::abs(dm.real()), std::abs(dm.imag()));
    if (da > 0x1p200 || (da < 0x1p-200 && da > 0.0)) {
      int k;
      std::frexp(da, &k);
      dm = {std::ldexp(dm.real(), 1 - k), std::ldexp(dm.imag(), 1 - k)};
      de += k - 1;
    }

    wm = wm * wm;
    we *= 2;
    double wa = std::max(std::abs(wm.real()), std::abs(wm.imag()));
    if (we == 0 && wa <= 0x1p200) {
      wm += c;
      continue;
    }
    // Renormalize, then either drop c (escaped) or fold it back in.
    if (wa > 0.0) {
      int k;
      std::frexp(wa, &k);
      wm = {std::ldexp(wm.real(), 1 - k), std::ldexp(wm.imag(), 1 - k)};
      we += k - 1;
    }
    if (we <= 100) {
      wm = Cx{std::ldexp(wm.real(), static_cast<int>(we)),
              std::ldexp(wm.imag(), static_cast<int>(we))} +
           c;
      we = 0;
    }
  }

  Cx fm;
  long fe;
  if (we == 0) {
    fm = wm - z;
    fe = 0;
  } else {
    fm = wm;
    fe = we;
  }
  Cx gm;
  long ge;
  if (de > 60) {
    gm = dm;
    ge = de;
  } else if (de < -60) {
    gm = {-1.0, 0.0};
    ge = 0;
  } else {
    gm = Cx{std::ldexp(dm.real(), static_cast<int>(de)),
            std::ldexp(dm.imag(), static_cast<int>(de))} -
         Cx{1.0, 0.0};
    ge = 0;
  }
  if (std::abs(gm) < 1e-300) gm = {1e-300, 0.0};

  NewtonEval out;
  Cx q = fm / gm;
  int qe = static_cast<int>(std::clamp(fe - ge, -900L, 900L));
  out.ratio = {std::ldexp(q.real(), qe), std::ldexp(q.imag(), qe)};
  out.residual = fe > 900
                     ? 1e300
                     : std::abs(fm) * std::ldexp(1.0, static_cast<int>(fe));
  return out;
}

struct RootSolve {
  std::vector<Cx> roots;
  std::size_t unresolved_duplicates = 0;
};

// Aberth-Ehrlich for the 2^n roots of T^n(z) - z, quadratic family.
// Phases: (1) damped per-point Newton approach from the initial circle (the
// far field contracts by only ~2^-n per step, so an O(N^2) sweep would be
// wasted there); (2) simultaneous sweeps with pairwise repulsion; (3) repair
// rounds that reseed duplicate approximants into the largest angular gaps.
RootSolve quadratic_periodic_roots(Cx c, int n, long degree) {
  const auto N = static_cast<std::size_t>(degree);
  std::vector<Cx> z(N);
  SplitMix64 jitter(0x414245525448ULL);  // fixed stream: guesses are part of the contract
  for (std::size_t k = 0; k < N; ++k) {
    double theta =
        kTwoPi * (static_cast<double>(k) + 0.4 * (jitter.next_unit() - 0.5)) /
        static_cast<double>(N);
    z[k] = Cx{1.2 * std::cos(theta), 1.2 * std::sin(theta)};
  }

  // Approach phase: damped per-point Newton until each point sits near the
  // root shell. Step size is no proxy for distance here (far outside, the
  // cascade contracts by only ~2^-n per step), so the settle test uses the
  // residual; the far field (astronomic residual) is nearly radial and
  // uniformly contracting, which makes a capped over-relaxation safe.
  {
    std::vector<char> moving(N, 1);
    std::size_t count = N;
    for (int iter = 0; iter < 8000 && count > 0; ++iter) {
      count = 0;
      for (std::size_t i = 0; i < N; ++i) {
        if (!moving[i]) continue;
        NewtonEval ev = periodic_newton_eval(c, z[i], n);
        double a = std::abs(ev.ratio);
        if (ev.residual <= 50.0 && a <= 0.01) {
          moving[i] = 0;
          continue;
        }
        Cx step = ev.ratio;
        if (a > 0.05) {
          step *= 0.05 / a;
        } else if (ev.residual > 1e10) {
          step *= 4.0;
        }
        z[i] -= step;
        ++count;
      }
    }
  }

  std::vector<double> xr(N), xi(N);
  std::vector<char> locked(N, 0);
  constexpr int kSweepBudget = 500;
  constexpr double kDedup = 1e-7;
  int sweeps_used = 0;
  double worst = 1e300;
  std::size_t leftover = 0;

  for (int round = 0; round < 8; ++round) {
    // Split exact coincidences so the repulsion term can act on them.
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(z[i].real() - z[j].real()) > 1e-9) continue;
        if (std::abs(z[i] - z[j]) < 1e-9) {
          double phi = 2.399963229728653 * static_cast<double>(i + 1);
          z[i] += Cx{3e-7 * std::cos(phi), 3e-7 * std::sin(phi)};
          locked[i] = 0;
          locked[j] = 0;
        }
      }
    }

    int budget = std::min(64, kSweepBudget - sweeps_used);
    for (int sweep = 0; sweep < budget; ++sweep) {
      ++sweeps_used;
      for (std::size_t i = 0; i < N; ++i) {
        xr[i] = z[i].real();
        xi[i] = z[i].imag();
      }
      double max_step = 0.0;
      std::size_t active = 0;
      for (std::size_t i = 0; i < N; ++i) {
        // Locked points stay in everyone's repulsion sum but are not moved.
        if (locked[i]) continue;
        ++active;
        NewtonEval ev = periodic_newton_eval(c, z[i], n);
        double sr = 0.0, si = 0.0;
        const double ar = z[i].real(), ai = z[i].imag();
        for (std::size_t j = 0; j < N; ++j) {
          if (j == i) continue;
          double dx = ar - xr[j];
          double dy = ai - xi[j];
          double d2 = dx * dx + dy * dy;
          if (d2 < 1e-28) continue;
          double inv = 1.0 / d2;
          sr += dx * inv;
          si -= dy * inv;
        }
        Cx denom = Cx{1.0, 0.0} - ev.ratio * Cx{sr, si};
        Cx alpha = std::abs(denom) < 1e-12 ? ev.ratio : ev.ratio / denom;
        double a = std::abs(alpha);
        if (a > 0.25) alpha *= 0.25 / a;
        z[i] -= alpha;
        if (a < 1e-13 * (1.0 + std::abs(z[i]))) locked[i] = 1;
        max_step = std::max(max_step, a);
        xr[i] = z[i].real();
        xi[i] = z[i].imag();
      }
      if (active == 0 || max_step < 1e-12) break;
    }

    // Polish, then look for unresolved duplicates.
    worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      for (int it = 0; it < 3; ++it) {
        z[i] -= periodic_newton_eval(c, z[i], n).ratio;
      }
      worst = std::max(worst, periodic_newton_eval(c, z[i], n).residual);
    }

    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::arg(z[a]) < std::arg(z[b]);
    });
    std::vector<std::size_t> extras;
    std::vector<std::size_t> ring;  // unique, angularly ordered
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < N; ++i) {
      Cx p = z[order[i]];
      bool dup = false;
      for (int gx = -1; gx <= 1 && !dup; ++gx) {
        for (int gy = -1; gy <= 1 && !dup; ++gy) {
          auto it = seen.find(
              grid_key(p.real() + gx * kDedup, p.imag() + gy * kDedup, kDedup));
          if (it == seen.end()) continue;
          for (std::size_t j : it->second) {
            if (std::abs(p - z[j]) <= kDedup) {
              dup = true;
              break;
            }
          }
        }
      }
      if (dup) {
        extras.push_back(order[i]);
      } else {
        seen[grid_key(p.real(), p.imag(), kDedup)].push_back(order[i]);
        ring.push_back(order[i]);
      }
    }
    leftover = extras.size();
    if ((extras.empty() && worst <= 1e-8) || sweeps_used >= kSweepBudget) break;

    if (!extras.empty() && ring.size() >= 3) {
      // Reseed extras into the widest angular gaps of the resolved ring.
      struct Gap {
        double width;
        double theta;
        double radius;
      };
      std::vector<Gap> gaps;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        Cx a = z[ring[i]];
        Cx b = z[ring[(i + 1) % ring.size()]];
        double ta = std::arg(a), tb = std::arg(b);
        double width = tb - ta;
        if (i + 1 == ring.size()) width += kTwoPi;
        gaps.push_back({width, ta + width / 2.0, (std::abs(a) + std::abs(b)) / 2.0});
      }
      for (std::size_t e : extras) {
        std::size_t best = 0;
        for (std::size_t g = 1; g < gaps.size(); ++g) {
          if (gaps[g].width > gaps[best].width) best = g;
        }
        Gap g = gaps[best];
        z[e] = Cx{g.radius * std::cos(g.theta), g.radius * std::sin(g.theta)};
        locked[e] = 0;
        gaps[best].width = g.width / 2.0;
        gaps[best].theta = g.theta - g.width / 4.0;
        gaps.push_back({g.width / 2.0, g.theta + g.width / 4.0, g.radius});
      }
    }
  }

  if (worst > 1e-8) {
    throw RootFindingDiverged(
        "periodic_points: max residual " + std::to_string(worst) +
        " after Aberth sweep budget");
  }
  return RootSolve{std::move(z), leftover};
}

}  // namespace

std::string orbit_method_name(OrbitMethod m) {
  switch (m) {
    case OrbitMethod::Separated: return "separated";
    case OrbitMethod::Preimage: return "preimage";
    case OrbitMethod::Periodic: return "periodic";
  }
  return "?";
}

double bowen_distance(const MapSpec& map, Cx x, Cx y, int n) {
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, std::abs(x - y));
    if (i + 1 < n) {
      x = apply(map, x);
      y = apply(map, y);
    }
  }
  return d;
}

OrbitSet periodic_points(const MapSpec& map, int n) {
  if (n < 1) throw Error("periodic_points: n must be >= 1");
  long total = checked_pow(map.degree, n);

  OrbitSet out{OrbitMethod::Periodic, n, map, {}, 0.0, {0.0, 0.0}, {}};

  if (map.family == MapFamily::Power) {
    // Solutions of z^{d^n} = z on the unit circle: the (d^n - 1)-th roots of
    // unity. z = 0 is the superattracting fixed point and is off J.
    long count = total - 1;
    out.points.reserve(count);
    for (long k = 0; k < count; ++k) {
      double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
      out.points.emplace_back(std::cos(theta), std::sin(theta));
    }
    return out;
  }

  RootSolve solve = quadratic_periodic_roots(map.c, n, total);
  std::vector<Cx>& roots = solve.roots;
  if (solve.unresolved_duplicates > 0) {
    out.warnings.push_back(
        "periodic_points: " + std::to_string(solve.unresolved_duplicates) +
        " approximant(s) still duplicated after the repair budget; the set "
        "may be missing roots");
  }

  // Repelling filter: points with log|(T^n)'| <= 0 sit in attracting basins
  // and are off J.
  std::vector<Cx> kept;
  kept.reserve(roots.size());
  int near_marginal = 0;
  for (Cx z : roots) {
    double s;
    try {
      s = log_deriv_birkhoff(map, z, n);
    } catch (const DerivativeVanishes&) {
      continue;
    }
    if (s <= 0.0) continue;
    if (s <= 1e-6) {
      ++near_marginal;
      continue;
    }
    kept.push_back(z);
  }
  if (near_marginal > 0) {
    out.warnings.push_back("periodic_points: excluded " +
                           std::to_string(near_marginal) +
                           " point(s) with log-derivative sum within 1e-6 of 0");
  }

  // Duplicate collapse at 1e-7 in the plane metric, via a spatial hash.
  std::vector<Cx> unique;
  unique.reserve(kept.size());
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  constexpr double kDedup = 1e-7;
  for (Cx z : kept) {
    bool dup = false;
    for (int gx = -1; gx <= 1 && !dup; ++gx) {
      for (int gy = -1; gy <= 1 && !dup; ++gy) {
        auto it = grid.find(grid_key(z.real() + gx * kDedup, z.imag() + gy * kDedup, kDedup));
        if (it == grid.end()) continue;
        for (std::size_t idx : it->second) {
          if (std::abs(z - unique[idx]) <= kDedup) {
            dup = true;
            break;
          }
        }
      }
    }
    if (!dup) {
      grid[grid_key(z.real(), z.imag(), kDedup)].push_back(unique.size());
      unique.push_back(z);
    }
  }

  std::sort(unique.begin(), unique.end(), [](Cx a, Cx b) {
    double pa = std::arg(a), pb = std::arg(b);
    if (pa != pb) return pa < pb;
    return std::norm(a) < std::norm(b);
  });
  out.points = std::move(unique);
  return out;
}

OrbitSet preimage_set(const MapSpec& map, Cx base, int n) {
  if (n < 1) throw Error("preimage_set: n must be >= 1");
  checked_pow(map.degree, n);

  std::vector<Cx> level{base};
  for (int depth = 0; depth < n; ++depth) {
    std::vector<Cx> next;
    next.reserve(level.size() * map.degree);
    for (Cx z : level) {
      for (int b = 0; b < map.degree; ++b) {
        next.push_back(preimage_branch(map, z, b));
      }
    }
    level = std::move(next);
  }
  return OrbitSet{OrbitMethod::Preimage, n, map, std::move(level), 0.0, base, {}};
}

OrbitSet separated_set(const MapSpec& map, int n, double eps, int sample_size,
                       std::uint64_t seed) {
  if (n < 1) throw Error("separated_set: n must be >= 1");
  if (!(eps > 0.0 && eps < 0.3)) {
    throw Error("separated_set: eps must lie in (0, 0.3)");
  }

  std::vector<Cx> sample = sample_julia(map, sample_size, seed);

  // Greedy packing in sample order. d_n(x, y) >= |x - y|, so only admitted
  // points in the 3x3 cell neighborhood (cell = eps) of a candidate can
  // reject it; the grid prunes without changing the sequential result.
  std::vector<Cx> admitted;
  std::vector<double> orbits;  // admitted orbits, n complex values each
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  std::vector<Cx> scratch(n);

  for (Cx y : sample) {
    Cx w = y;
    for (int i = 0; i < n; ++i) {
      scratch[i] = w;
      w = apply(map, w);
    }
    bool ok = true;
    for (int gx = -1; gx <= 1 && ok; ++gx) {
      for (int gy = -1; gy <= 1 && ok; ++gy) {
        auto it = grid.find(grid_key(y.real() + gx * eps, y.imag() + gy * eps, eps));
        if (it == grid.end()) continue;
        for (std::size_t a : it->second) {
          bool below = true;  // d_n < eps against admitted point a?
          const double* o = orbits.data() + 2 * n * a;
          for (int i = 0; i < n; ++i) {
            double dx = scratch[i].real() - o[2 * i];
            double dy = scratch[i].imag() - o[2 * i + 1];
            if (dx * dx + dy * dy >= eps * eps) {
              below = false;
              break;
            }
          }
          if (below) {
            ok = false;
            break;
          }
        }
      }
    }
    if (!ok) continue;
    grid[grid_key(y.real(), y.imag(), eps)].push_back(admitted.size());
    admitted.push_back(y);
    for (int i = 0; i < n; ++i) {
      orbits.push_back(scratch[i].real());
      orbits.push_back(scratch[i].imag());
    }
  }

  return OrbitSet{OrbitMethod::Separated, n, map, std::move(admitted), eps,
                  {0.0, 0.0}, {}};
}

OrbitSet build_orbit(const MapSpec& map, OrbitMethod method, int n,
                     const SeparatedParams& sep, const Cx* base) {
  switch (method) {
    case OrbitMethod::Periodic:
      return periodic_points(map, n);
    case OrbitMethod::Preimage:
      return preimage_set(map, base != nullptr ? *base : repelling_fixed_point(map), n);
    case OrbitMethod::Separated:
      return separated_set(map, n, sep.eps, sep.sample_size, sep.seed);
  }
  throw Error("build_orbit: unknown method");
}

}  // namespace ratelab

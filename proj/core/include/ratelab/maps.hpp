#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ratelab/errors.hpp"

namespace ratelab {

using Cx = std::complex<double>;

enum class MapFamily { Power, Quadratic };

// A member of the supported rational-map families acting on (a neighborhood
// of) its Julia set: z^d with d >= 2, or z^2 + c. Power maps have the unit
// circle as Julia set; quadratic maps with |c| < 0.25 have a quasicircle.
// Hyperbolicity outside that certified regime is probed, not certified
// (see hyperbolicity_probe).
struct MapSpec {
  MapFamily family;
  int degree;  // d >= 2; always 2 for Quadratic
  Cx c;        // Quadratic parameter; unused for Power

  static MapSpec power(int d);
  static MapSpec quadratic(Cx c);

  std::string label() const;  // e.g. "powermap:2", "quadratic:0.1"
};

// T(z)
Cx apply(const MapSpec& map, Cx z);

// T'(z): d z^{d-1} or 2z.
Cx derivative(const MapSpec& map, Cx z);

// T^n(z)
Cx iterate(const MapSpec& map, Cx z, int n);

// log|(T^n)'(z)| = sum_{i<n} log|T'(T^i z)|, accumulated term by term
// (never by differencing large products). Throws DerivativeVanishes if
// some |T'(T^i z)| < 1e-30.
double log_deriv_birkhoff(const MapSpec& map, Cx z, int n);

// The b-th solution of T(w) = z, b in [0, d). Branches are ordered from the
// principal d-th root; each is refined by one Newton step on T(w) - z to
// cancel branch rounding. At a critical value the repeated root is returned
// for every branch.
Cx preimage_branch(const MapSpec& map, Cx z, int branch);

// All d solutions of T(w) = z, with multiplicity, in branch order.
std::vector<Cx> preimages(const MapSpec& map, Cx z);

// A repelling fixed point on J: z = 1 for power maps; the root of
// z^2 + c = z with larger multiplier for quadratics.
Cx repelling_fixed_point(const MapSpec& map);

// Deterministic approximate Julia-set sample by inverse iteration: start at
// a repelling fixed point, repeatedly apply a uniformly random preimage
// branch (SplitMix64 stream from `seed`), discard a 50-step burn-in prefix.
std::vector<Cx> sample_julia(const MapSpec& map, int count, std::uint64_t seed);

// min over sampled Julia points of (1/n) log|(T^n)'(z)|. A positive value is
// consistent with expansion on J; a vanishing derivative along some sampled
// orbit yields -inf.
double hyperbolicity_probe(const MapSpec& map, int n, int samples,
                           std::uint64_t seed);

}  // namespace ratelab

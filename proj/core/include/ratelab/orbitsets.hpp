#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratelab/maps.hpp"

namespace ratelab {

enum class OrbitMethod { Separated, Preimage, Periodic };

std::string orbit_method_name(OrbitMethod m);

// A finite orbit set J_n: maximal (eps,n)-separated points, n-preimages of a
// base point, or repelling n-periodic points.
struct OrbitSet {
  OrbitMethod method;
  int horizon;  // n
  MapSpec map;
  std::vector<Cx> points;
  double eps = 0.0;                   // Separated only
  Cx base = {0.0, 0.0};               // Preimage only
  std::vector<std::string> warnings;  // non-fatal diagnostics
};

// Bowen distance d_n(x, y) = max_{0 <= i < n} |T^i x - T^i y|.
double bowen_distance(const MapSpec& map, Cx x, Cx y, int n);

// Repelling solutions of T^n(z) = z. Power maps: the (d^n - 1)-th roots of
// unity in closed form. Quadratics: simultaneous iteration (Aberth-Ehrlich)
// on z -> T^n(z) - z with exponent-tracked evaluation, initial guesses on a
// circle of radius 1.2 with deterministic angular jitter, Newton polish,
// repelling filter (log-derivative sum > 0) and duplicate collapse at 1e-7.
// Requires d^n <= 2^22. Throws RootFindingDiverged if some residual exceeds
// 1e-8 after the 500-sweep budget.
OrbitSet periodic_points(const MapSpec& map, int n);

// Breadth-first expansion of preimage branches to depth n; multiplicities
// kept, so the count is exactly d^n. Requires d^n <= 2^22.
OrbitSet preimage_set(const MapSpec& map, Cx base, int n);

// Greedy Bowen-distance packing over sample_julia(map, sample_size, seed) in
// sample order: a point is admitted iff d_n to every admitted point is
// >= eps. Maximal relative to the sample by construction.
OrbitSet separated_set(const MapSpec& map, int n, double eps, int sample_size,
                       std::uint64_t seed);

struct SeparatedParams {
  double eps = 0.05;
  int sample_size = 100000;
  std::uint64_t seed = 1;
};

// Dispatch on the construction method. Preimage sets are rooted at `base`
// when given, else at the repelling fixed point.
OrbitSet build_orbit(const MapSpec& map, OrbitMethod method, int n,
                     const SeparatedParams& sep = {},
                     const Cx* base = nullptr);

}  // namespace ratelab

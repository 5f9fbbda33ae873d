#include "ratelab/maps.hpp"

#include <cmath>
#include <sstream>

#include "ratelab/rng.hpp"

namespace ratelab {

namespace {

// b-th branch of the d-th root of w, from the principal branch, in polar
// form. Shared by both families so that quadratic:c=0 reproduces powermap:2
// exactly.
Cx nth_root_branch(Cx w, int d, int branch) {
  if (w == Cx{0.0, 0.0}) return {0.0, 0.0};
  double r = std::exp(std::log(std::abs(w)) / d);
  double theta = (std::arg(w) + 6.283185307179586476925286766559 * branch) / d;
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::string format_real(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

MapSpec MapSpec::power(int d) {
  if (d < 2) throw Error("MapSpec: power map degree must be >= 2");
  return MapSpec{MapFamily::Power, d, Cx{0.0, 0.0}};
}

MapSpec MapSpec::quadratic(Cx c) {
  return MapSpec{MapFamily::Quadratic, 2, c};
}

std::string MapSpec::label() const {
  if (family == MapFamily::Power) {
    return "powermap:" + std::to_string(degree);
  }
  std::string s = "quadratic:" + format_real(c.real());
  if (c.imag() != 0.0) s += "," + format_real(c.imag());
  return s;
}

Cx apply(const MapSpec& map, Cx z) {
  if (map.family == MapFamily::Quadratic) return z * z + map.c;
  Cx w = z;
  for (int i = 1; i < map.degree; ++i) w *= z;
  return w;
}

Cx derivative(const MapSpec& map, Cx z) {
  if (map.family == MapFamily::Quadratic) return 2.0 * z;
  Cx w = z;
  for (int i = 2; i < map.degree; ++i) w *= z;
  return static_cast<double>(map.degree) * w;
}

Cx iterate(const MapSpec& map, Cx z, int n) {
  for (int i = 0; i < n; ++i) z = apply(map, z);
  return z;
}

double log_deriv_birkhoff(const MapSpec& map, Cx z, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double m = std::abs(derivative(map, z));
    if (m < 1e-30) {
      throw DerivativeVanishes("log_deriv_birkhoff: |T'| < 1e-30 at orbit step " +
                               std::to_string(i));
    }
    sum += std::log(m);
    z = apply(map, z);
  }
  return sum;
}

Cx preimage_branch(const MapSpec& map, Cx z, int branch) {
  Cx w = map.family == MapFamily::Quadratic
             ? nth_root_branch(z - map.c, 2, branch)
             : nth_root_branch(z, map.degree, branch);
  // One Newton step on T(w) - z; skipped at the critical point where the
  // root is genuinely repeated.
  Cx dw = derivative(map, w);
  if (std::abs(dw) > 1e-300) w -= (apply(map, w) - z) / dw;
  return w;
}

std::vector<Cx> preimages(const MapSpec& map, Cx z) {
  std::vector<Cx> out;
  out.reserve(map.degree);
  for (int b = 0; b < map.degree; ++b) out.push_back(preimage_branch(map, z, b));
  return out;
}

Cx repelling_fixed_point(const MapSpec& map) {
  if (map.family == MapFamily::Power) return {1.0, 0.0};
  // Roots of z^2 - z + c; pick the one with larger |2z|.
  Cx s = std::sqrt(Cx{1.0, 0.0} - 4.0 * map.c);
  Cx p_plus = (Cx{1.0, 0.0} + s) / 2.0;
  Cx p_minus = (Cx{1.0, 0.0} - s) / 2.0;
  return std::abs(p_plus) >= std::abs(p_minus) ? p_plus : p_minus;
}

std::vector<Cx> sample_julia(const MapSpec& map, int count, std::uint64_t seed) {
  if (count < 1) throw Error("sample_julia: count must be >= 1");
  constexpr int kBurnIn = 50;
  SplitMix64 rng(seed);
  std::vector<Cx> out;
  out.reserve(count);
  Cx z = repelling_fixed_point(map);
  const auto d = static_cast<std::uint32_t>(map.degree);
  for (int i = 0; i < kBurnIn + count; ++i) {
    z = preimage_branch(map, z, static_cast<int>(rng.next_below(d)));
    if (i >= kBurnIn) out.push_back(z);
  }
  return out;
}

double hyperbolicity_probe(const MapSpec& map, int n, int samples,
                           std::uint64_t seed) {
  if (n < 1) throw Error("hyperbolicity_probe: n must be >= 1");
  auto points = sample_julia(map, samples, seed);
  double worst = std::numeric_limits<double>::infinity();
  for (Cx z : points) {
    double rate;
    try {
      rate = log_deriv_birkhoff(map, z, n) / n;
    } catch (const DerivativeVanishes&) {
      rate = -std::numeric_limits<double>::infinity();
    }
    worst = std::min(worst, rate);
  }
  return worst;
}

}  // namespace ratelab

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ratelab/maps.hpp"
#include "ratelab/orbitsets.hpp"
#include "ratelab/shift.hpp"

namespace ratelab {

// Potentials on a map's Julia set: k_t = -t log|T'|, or a real polynomial in
// (Re z, Im z) of degree <= 4 (15 monomial coefficients in graded order).
struct MapPotential {
  enum class Kind { Kt, Poly };
  Kind kind = Kind::Poly;
  double t = 0.0;
  std::array<double, 15> coeff{};
  std::string name;

  static MapPotential kt(double t);
  static MapPotential constant(double a);
  static MapPotential poly(const std::array<double, 15>& coeff, std::string name);
  static MapPotential re_power(int j);  // Re z^j, 0 <= j <= 4
  static MapPotential im_power(int j);  // Im z^j

  MapPotential scaled(double factor) const;

  bool is_kt() const { return kind == Kind::Kt; }
  double eval(const MapSpec& map, Cx z) const;
  // Exact sup bound over |z| <= radius (monomial bound per coefficient).
  double sup_bound(double radius) const;
};

// S_n(pot)(y) = sum_{i<n} pot(T^i y). For k_t this is -t * log|(T^n)'(y)|.
double birkhoff_sum(const MapSpec& map, const MapPotential& pot, Cx y, int n);

// Gibbs-weighted ensemble nu_{n,f} over a map orbit set. Atoms are the
// empirical measures mu_{y,n} of the orbit points, represented by pairings
// only; log-weights are normalized so logsumexp == 0. log|(T^n)'(y)| is
// cached per atom (-inf marks a vanishing derivative along the orbit).
struct MapEnsemble {
  MapSpec map;
  OrbitMethod method;
  int horizon;
  std::vector<Cx> points;
  std::vector<double> log_weights;
  std::vector<double> log_derivs;
  std::string potential_label;

  long size() const { return static_cast<long>(points.size()); }
};

MapEnsemble gibbs_weights(const OrbitSet& orbit, const MapPotential& f,
                          int workers = 1);

// Barycenter pairing: sum_i w_i mu_{y_i,n}(g).
double ensemble_mean(const MapEnsemble& nu, const MapPotential& g,
                     int workers = 1);

// Cached log|(T^n)'(y)| for every point of an orbit set.
struct OrbitDerivCache {
  MapSpec map;
  OrbitMethod method;
  int horizon;
  std::vector<Cx> points;
  std::vector<double> log_derivs;

  long size() const { return static_cast<long>(points.size()); }
};

OrbitDerivCache cache_log_derivs(const OrbitSet& orbit, int workers = 1);

// Gibbs ensemble over all configurations of a box (atom i is the i-th
// configuration in lexicographic order).
struct ShiftEnsemble {
  ShiftSpec spec;
  Box box;
  Extension extension;
  std::uint8_t background;
  std::vector<double> log_weights;
  std::string potential_label;

  long size() const { return static_cast<long>(log_weights.size()); }
  long horizon() const { return box.volume(); }
};

ShiftEnsemble gibbs_weights_shift(const ShiftSpec& spec, const Box& box,
                                  Extension ext, std::uint8_t background,
                                  const ShiftPotential& f, int workers = 1);

double ensemble_mean_shift(const ShiftEnsemble& nu, const ShiftPotential& g,
                           int workers = 1);

// Ordered test family g_1, ..., g_J defining the weak* metric
//   rho(mu, mu') = sum_j 2^{-j} min(1, |mu(g_j) - mu'(g_j)| / s_j),
// with scales s_j = 1 + sup|g_j|. Each summand is a convex function of the
// pairing vector, so open balls are convex.
struct TestFamily {
  std::vector<MapPotential> members;
  std::vector<double> scales;
  // Constant 1 plus Re z^j, Im z^j for j = 1..4; scales 1 + 1.3^j.
  static TestFamily default_family();
};

// Pairing vector of mu_{y,n} against the family.
std::vector<double> pairings(const MapSpec& map, const TestFamily& fam, Cx y,
                             int n);

// A measure known through its pairings against a fixed family.
struct ReferenceMeasure {
  std::vector<double> values;
  std::string label;

  // Uniform measure on the unit circle; pairings by 4096-point trapezoid
  // rule (exact for trigonometric polynomials of degree < 2048).
  static ReferenceMeasure uniform_circle(const TestFamily& fam);
};

double weakstar_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> scales);

// Shift-side test family (locally constant test functions) and references.
struct ShiftTestFamily {
  std::vector<ShiftPotential> members;
  std::vector<double> scales;
  // Indicators 1[xi_0 = s] for s = 1..m-1; scales = 2.
  static ShiftTestFamily single_site(const ShiftSpec& spec);
};

std::vector<double> shift_pairings(const ShiftTestFamily& fam,
                                   const BoxConfig& cfg);

// Pairings of a Bernoulli(p_0..p_{m-1}) product measure against single-site
// indicator families; general members are rejected.
ReferenceMeasure bernoulli_reference(const ShiftTestFamily& fam,
                                     const std::vector<double>& probs);

}  // namespace ratelab

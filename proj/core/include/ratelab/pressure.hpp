#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratelab/gibbs.hpp"
#include "ratelab/orbitsets.hpp"
#include "ratelab/shift.hpp"

namespace ratelab {

struct PressureEstimate {
  double value;
  long horizon;  // n, or |Lambda| for shifts
  std::string method;
  // |est_n - est_{n-1}| when a second horizon was computed; NaN otherwise.
  double successive_diff = std::numeric_limits<double>::quiet_NaN();
};

// (1/n) log sum_{y in J_n} e^{S_n(pot)(y)}.
PressureEstimate pressure_estimate(const OrbitSet& orbit, const MapPotential& pot,
                                   int workers = 1);

// Same, reusing cached log-derivative sums: P_n(t) = (1/n) LSE(-t L_n(y)).
double pressure_estimate_kt(const OrbitDerivCache& cache, double t);

// (1/|Lambda|) log sum over all configurations of e^{sum_Lambda f}.
PressureEstimate shift_pressure_estimate(const ShiftSpec& spec, const Box& box,
                                         const ShiftPotential& pot,
                                         Extension ext,
                                         std::uint8_t background = 0,
                                         int workers = 1);

// Exact oracle for one-dimensional shifts: log of the Perron eigenvalue of
// the m^r x m^r transfer matrix M[u][v] = e^{f(u)} 1[u, v overlap-compatible],
// by power iteration to relative 1e-12. Requires m^r <= 2^14. Throws
// NonConvergence after 1e5 iterations.
double transfer_matrix_pressure(const ShiftSpec& spec, const ShiftPotential& pot);

// Sampled pressure curve t -> P(t); uniform grid, at least 5 points.
struct PressureCurve {
  std::vector<double> t;
  std::vector<double> P;
  double spacing;
  std::string source;

  static PressureCurve from_samples(std::vector<double> t, std::vector<double> P,
                                    std::string source = "synthetic");
  int size() const { return static_cast<int>(t.size()); }
};

// Builds the orbit set once and sweeps Kt(t) over the grid; the Birkhoff
// log-derivative sums are computed a single time.
PressureCurve pressure_curve(const MapSpec& map, OrbitMethod method, int n,
                             const std::vector<double>& t_grid,
                             const SeparatedParams& sep = {}, int workers = 1);

PressureCurve pressure_curve(const OrbitDerivCache& cache,
                             const std::vector<double>& t_grid,
                             int workers = 1);

std::vector<double> default_t_grid();  // [-3, 3], spacing 0.05

}  // namespace ratelab

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ratelab/errors.hpp"

namespace ratelab {

// Full shift on S^{Z^l}, l in {1, 2}, with the metric
// rho(xi, eta) = delta^{min{max_i |x_i| : xi_x != eta_x}}.
struct ShiftSpec {
  int alphabet;  // m >= 2
  int dim;       // l in {1, 2}
  double delta;  // metric base in (0, 1)

  static ShiftSpec make(int m, int l, double delta = 0.5);
};

// Box Lambda(x) = {y : 0 <= y_i < x_i}. For dim 1 the second side is 1.
struct Box {
  int dim;
  std::array<int, 2> sides;

  static Box line(int n) { return Box{1, {n, 1}}; }
  static Box rect(int nx, int ny) { return Box{2, {nx, ny}}; }
  long volume() const { return static_cast<long>(sides[0]) * sides[1]; }
  std::string label() const;
};

enum class Extension { Periodic, Padded };

// A configuration on a box together with the rule that extends it to the
// whole lattice: periodic wrap-around (an element of Per_x) or a constant
// background fill.
struct BoxConfig {
  Box box;
  std::vector<std::uint8_t> symbols;  // row-major over the box
  Extension extension = Extension::Periodic;
  std::uint8_t background = 0;

  // Extension-resolved read at an arbitrary lattice site.
  int at(int x, int y = 0) const {
    if (extension == Extension::Periodic) {
      int wx = x % box.sides[0];
      if (wx < 0) wx += box.sides[0];
      int wy = y % box.sides[1];
      if (wy < 0) wy += box.sides[1];
      return symbols[static_cast<std::size_t>(wy) * box.sides[0] + wx];
    }
    if (x < 0 || x >= box.sides[0] || y < 0 || y >= box.sides[1]) {
      return background;
    }
    return symbols[static_cast<std::size_t>(y) * box.sides[0] + x];
  }
};

// Read-only view of tau^y xi: (translate(cfg, y)).at(x) == cfg.at(x + y).
struct TranslatedView {
  const BoxConfig* cfg;
  int ox, oy;
  int at(int x, int y = 0) const { return cfg->at(x + ox, y + oy); }
};

inline TranslatedView translate(const BoxConfig& cfg, int ox, int oy = 0) {
  return TranslatedView{&cfg, ox, oy};
}

// Locally constant potential: reads the pattern on a finite window of
// offsets (origin included, |W| <= 8) and looks it up in a table of size
// m^|W|. Table index: sum_i s_i m^i with s_i the symbol at window offset i.
struct ShiftPotential {
  int alphabet;
  std::vector<std::array<int, 2>> window;
  std::vector<double> table;
  std::string name;

  static ShiftPotential single_site(int m, std::vector<double> values,
                                    std::string name = "");
  // beta * 1[xi_0 == xi_{e1}] on a 1-d shift.
  static ShiftPotential nearest_neighbor(int m, double beta);
  // beta * (1[xi_0 == xi_{e1}] + 1[xi_0 == xi_{e2}]) on a 2-d shift.
  static ShiftPotential ising2d(int m, double beta);
  static ShiftPotential zero(int m, int dim);

  double max_abs() const;

  // Potential evaluated at tau^{(ox,oy)} xi.
  double eval(const BoxConfig& cfg, int ox, int oy = 0) const {
    std::size_t idx = 0, stride = 1;
    for (const auto& w : window) {
      idx += static_cast<std::size_t>(cfg.at(ox + w[0], oy + w[1])) * stride;
      stride *= alphabet;
    }
    return table[idx];
  }
};

// Number of configurations m^|Lambda|; throws CapExceeded above 2^24.
long config_count(const ShiftSpec& spec, const Box& box);

// The `index`-th configuration in lexicographic order (first row-major site
// is the most significant base-m digit).
BoxConfig config_at(const ShiftSpec& spec, const Box& box, Extension ext,
                    std::uint8_t background, long index);

long config_index(const ShiftSpec& spec, const BoxConfig& cfg);

// sum_{x in Lambda} f(tau^x xi), each term read through the extension rule.
double birkhoff_sum_shift(const ShiftPotential& pot, const BoxConfig& cfg);

// delta^r with r the smallest sup-norm radius of a site where the extended
// configurations differ, scanning |x_i| <= 64; 0 if no difference is found.
double metric_rho(const ShiftSpec& spec, const BoxConfig& a, const BoxConfig& b);

// Parses {"window": [[dx,dy],...], "values": {"<key>": real, ...}} with key
// the base-m encoding of the window pattern.
ShiftPotential shift_potential_from_json(const std::string& json_text, int m);
std::string shift_potential_to_json(const ShiftPotential& pot);

}  // namespace ratelab

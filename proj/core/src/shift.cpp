#include "ratelab/shift.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace ratelab {

namespace {
constexpr long kConfigCap = 1L << 24;
}

ShiftSpec ShiftSpec::make(int m, int l, double delta) {
  if (m < 2) throw Error("ShiftSpec: alphabet size must be >= 2");
  if (l != 1 && l != 2) throw Error("ShiftSpec: dimension must be 1 or 2");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("ShiftSpec: delta must be in (0,1)");
  return ShiftSpec{m, l, delta};
}

std::string Box::label() const {
  if (dim == 1) return std::to_string(sides[0]);
  return std::to_string(sides[0]) + "x" + std::to_string(sides[1]);
}

ShiftPotential ShiftPotential::single_site(int m, std::vector<double> values,
                                           std::string name) {
  if (static_cast<int>(values.size()) != m) {
    throw Error("single_site potential: need one value per symbol");
  }
  return ShiftPotential{m, {{0, 0}}, std::move(values),
                        name.empty() ? "single" : std::move(name)};
}

ShiftPotential ShiftPotential::nearest_neighbor(int m, double beta) {
  std::vector<double> table(static_cast<std::size_t>(m) * m, 0.0);
  for (int s = 0; s < m; ++s) table[s + static_cast<std::size_t>(m) * s] = beta;
  return ShiftPotential{m, {{0, 0}, {1, 0}}, std::move(table), "nn"};
}

ShiftPotential ShiftPotential::ising2d(int m, double beta) {
  std::vector<double> table(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int s0 = 0; s0 < m; ++s0) {
    for (int s1 = 0; s1 < m; ++s1) {
      for (int s2 = 0; s2 < m; ++s2) {
        double v = 0.0;
        if (s0 == s1) v += beta;
        if (s0 == s2) v += beta;
        std::size_t idx = static_cast<std::size_t>(s0) +
                          static_cast<std::size_t>(m) * s1 +
                          static_cast<std::size_t>(m) * m * s2;
        table[idx] = v;
      }
    }
  }
  return ShiftPotential{m, {{0, 0}, {1, 0}, {0, 1}}, std::move(table), "ising"};
}

ShiftPotential ShiftPotential::zero(int m, int dim) {
  (void)dim;
  return ShiftPotential{m, {{0, 0}}, std::vector<double>(m, 0.0), "zero"};
}

double ShiftPotential::max_abs() const {
  double v = 0.0;
  for (double t : table) v = std::max(v, std::abs(t));
  return v;
}

long config_count(const ShiftSpec& spec, const Box& box) {
  if (box.dim != spec.dim) throw Error("config_count: box/spec dimension mismatch");
  long v = 1;
  for (long i = 0; i < box.volume(); ++i) {
    v *= spec.alphabet;
    if (v > kConfigCap) {
      throw CapExceeded("configuration count " + std::to_string(spec.alphabet) +
                        "^" + std::to_string(box.volume()) +
                        " exceeds the 2^24 cap");
    }
  }
  return v;
}

BoxConfig config_at(const ShiftSpec& spec, const Box& box, Extension ext,
                    std::uint8_t background, long index) {
  long vol = box.volume();
  BoxConfig cfg{box, std::vector<std::uint8_t>(static_cast<std::size_t>(vol)),
                ext, background};
  for (long s = vol - 1; s >= 0; --s) {
    cfg.symbols[static_cast<std::size_t>(s)] =
        static_cast<std::uint8_t>(index % spec.alphabet);
    index /= spec.alphabet;
  }
  return cfg;
}

long config_index(const ShiftSpec& spec, const BoxConfig& cfg) {
  long idx = 0;
  for (std::uint8_t s : cfg.symbols) idx = idx * spec.alphabet + s;
  return idx;
}

double birkhoff_sum_shift(const ShiftPotential& pot, const BoxConfig& cfg) {
  double sum = 0.0;
  for (int y = 0; y < cfg.box.sides[1]; ++y) {
    for (int x = 0; x < cfg.box.sides[0]; ++x) {
      sum += pot.eval(cfg, x, y);
    }
  }
  return sum;
}

double metric_rho(const ShiftSpec& spec, const BoxConfig& a, const BoxConfig& b) {
  constexpr int kScanRadius = 64;
  int best = -1;
  int ry = spec.dim == 2 ? kScanRadius : 0;
  for (int y = -ry; y <= ry; ++y) {
    for (int x = -kScanRadius; x <= kScanRadius; ++x) {
      if (a.at(x, y) != b.at(x, y)) {
        int r = std::max(std::abs(x), std::abs(y));
        if (best < 0 || r < best) best = r;
      }
    }
  }
  if (best < 0) return 0.0;
  return std::pow(spec.delta, best);
}

ShiftPotential shift_potential_from_json(const std::string& json_text, int m) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  ShiftPotential pot;
  pot.alphabet = m;
  pot.name = j.value("name", "table");
  for (const auto& w : j.at("window")) {
    std::array<int, 2> off{0, 0};
    off[0] = w.at(0).get<int>();
    if (w.size() > 1) off[1] = w.at(1).get<int>();
    pot.window.push_back(off);
  }
  if (pot.window.empty() || pot.window.size() > 8) {
    throw Error("shift potential: window size must be in [1, 8]");
  }
  std::size_t size = 1;
  for (std::size_t i = 0; i < pot.window.size(); ++i) size *= m;
  pot.table.assign(size, 0.0);
  for (const auto& [key, value] : j.at("values").items()) {
    std::size_t idx = std::stoul(key);
    if (idx >= size) throw Error("shift potential: key out of range: " + key);
    pot.table[idx] = value.get<double>();
  }
  return pot;
}

std::string shift_potential_to_json(const ShiftPotential& pot) {
  nlohmann::json j;
  j["name"] = pot.name;
  j["window"] = nlohmann::json::array();
  for (const auto& w : pot.window) j["window"].push_back({w[0], w[1]});
  nlohmann::json values;
  for (std::size_t i = 0; i < pot.table.size(); ++i) {
    if (pot.table[i] != 0.0) values[std::to_string(i)] = pot.table[i];
  }
  j["values"] = values;
  return j.dump();
}

}  // namespace ratelab

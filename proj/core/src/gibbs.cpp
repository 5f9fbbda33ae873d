#include "ratelab/gibbs.hpp"

#include <cmath>

#include "ratelab/numeric.hpp"

namespace ratelab {

namespace {

// Graded monomial order x^j y^k, degree <= 4.
constexpr std::array<std::array<int, 2>, 15> kMonomials = {{{0, 0},
                                                            {1, 0},
                                                            {0, 1},
                                                            {2, 0},
                                                            {1, 1},
                                                            {0, 2},
                                                            {3, 0},
                                                            {2, 1},
                                                            {1, 2},
                                                            {0, 3},
                                                            {4, 0},
                                                            {3, 1},
                                                            {2, 2},
                                                            {1, 3},
                                                            {0, 4}}};

int monomial_slot(int j, int k) {
  for (std::size_t i = 0; i < kMonomials.size(); ++i) {
    if (kMonomials[i][0] == j && kMonomials[i][1] == k) return static_cast<int>(i);
  }
  throw Error("monomial degree out of range");
}

}  // namespace

MapPotential MapPotential::kt(double t) {
  MapPotential p;
  p.kind = Kind::Kt;
  p.t = t;
  p.name = "kt(" + std::to_string(t) + ")";
  return p;
}

MapPotential MapPotential::constant(double a) {
  MapPotential p;
  p.coeff[0] = a;
  p.name = "const(" + std::to_string(a) + ")";
  return p;
}

MapPotential MapPotential::poly(const std::array<double, 15>& coeff,
                                std::string name) {
  MapPotential p;
  p.coeff = coeff;
  p.name = std::move(name);
  return p;
}

MapPotential MapPotential::re_power(int j) {
  if (j < 0 || j > 4) throw Error("re_power: j must be in [0, 4]");
  MapPotential p;
  p.name = "re_z" + std::to_string(j);
  switch (j) {
    case 0: p.coeff[monomial_slot(0, 0)] = 1.0; break;
    case 1: p.coeff[monomial_slot(1, 0)] = 1.0; break;
    case 2:
      p.coeff[monomial_slot(2, 0)] = 1.0;
      p.coeff[monomial_slot(0, 2)] = -1.0;
      break;
    case 3:
      p.coeff[monomial_slot(3, 0)] = 1.0;
      p.coeff[monomial_slot(1, 2)] = -3.0;
      break;
    case 4:
      p.coeff[monomial_slot(4, 0)] = 1.0;
      p.coeff[monomial_slot(2, 2)] = -6.0;
      p.coeff[monomial_slot(0, 4)] = 1.0;
      break;
  }
  return p;
}

MapPotential MapPotential::im_power(int j) {
  if (j < 0 || j > 4) throw Error("im_power: j must be in [0, 4]");
  MapPotential p;
  p.name = "im_z" + std::to_string(j);
  switch (j) {
    case 0: break;  // identically zero
    case 1: p.coeff[monomial_slot(0, 1)] = 1.0; break;
    case 2: p.coeff[monomial_slot(1, 1)] = 2.0; break;
    case 3:
      p.coeff[monomial_slot(2, 1)] = 3.0;
      p.coeff[monomial_slot(0, 3)] = -1.0;
      break;
    case 4:
      p.coeff[monomial_slot(3, 1)] = 4.0;
      p.coeff[monomial_slot(1, 3)] = -4.0;
      break;
  }
  return p;
}

MapPotential MapPotential::scaled(double factor) const {
  MapPotential p = *this;
  if (kind == Kind::Kt) {
    p.t *= factor;
  } else {
    for (double& c : p.coeff) c *= factor;
  }
  p.name = std::to_string(factor) + "*" + name;
  return p;
}

double MapPotential::eval(const MapSpec& map, Cx z) const {
  if (kind == Kind::Kt) {
    double m = std::abs(derivative(map, z));
    if (m < 1e-30) throw DerivativeVanishes("k_t evaluated at a critical point");
    return -t * std::log(m);
  }
  double xp[5], yp[5];
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= 4; ++i) {
    xp[i] = xp[i - 1] * z.real();
    yp[i] = yp[i - 1] * z.imag();
  }
  double v = 0.0;
  for (std::size_t i = 0; i < kMonomials.size(); ++i) {
    if (coeff[i] != 0.0) v += coeff[i] * xp[kMonomials[i][0]] * yp[kMonomials[i][1]];
  }
  return v;
}

double MapPotential::sup_bound(double radius) const {
  if (kind == Kind::Kt) {
    throw Error("sup_bound: not defined for k_t potentials");
  }
  double v = 0.0;
  double rp[9];
  rp[0] = 1.0;
  for (int i = 1; i <= 8; ++i) rp[i] = rp[i - 1] * radius;
  for (std::size_t i = 0; i < kMonomials.size(); ++i) {
    v += std::abs(coeff[i]) * rp[kMonomials[i][0] + kMonomials[i][1]];
  }
  return v;
}

double birkhoff_sum(const MapSpec& map, const MapPotential& pot, Cx y, int n) {
  if (pot.is_kt()) return -pot.t * log_deriv_birkhoff(map, y, n);
  KahanSum acc;
  for (int i = 0; i < n; ++i) {
    acc.add(pot.eval(map, y));
    y = apply(map, y);
  }
  return acc.value();
}

namespace {

// log|(T^n)'| per point; -inf marks DerivativeVanishes.
std::vector<double> log_derivs_of(const MapSpec& map,
                                  const std::vector<Cx>& points, int n,
                                  int workers) {
  std::vector<double> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      try {
        out[i] = log_deriv_birkhoff(map, points[i], n);
      } catch (const DerivativeVanishes&) {
        out[i] = kNegInf;
      }
    }
  });
  return out;
}

std::vector<double> birkhoff_sums_of(const MapSpec& map, const MapPotential& pot,
                                     const std::vector<Cx>& points,
                                     const std::vector<double>& log_derivs,
                                     int n, int workers) {
  std::vector<double> out(points.size());
  if (pot.is_kt()) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (log_derivs[i] == kNegInf && pot.t != 0.0) {
        throw DerivativeVanishes(
            "birkhoff sums of k_t: orbit passes through a critical point");
      }
      out[i] = pot.t == 0.0 ? 0.0 : -pot.t * log_derivs[i];
    }
    return out;
  }
  parallel_for(points.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      out[i] = birkhoff_sum(map, pot, points[i], n);
    }
  });
  return out;
}

}  // namespace

MapEnsemble gibbs_weights(const OrbitSet& orbit, const MapPotential& f,
                          int workers) {
  if (orbit.points.empty()) throw Error("gibbs_weights: empty orbit set");
  MapEnsemble nu;
  nu.map = orbit.map;
  nu.method = orbit.method;
  nu.horizon = orbit.horizon;
  nu.points = orbit.points;
  nu.potential_label = f.name;
  nu.log_derivs = log_derivs_of(orbit.map, nu.points, orbit.horizon, workers);
  std::vector<double> sums = birkhoff_sums_of(orbit.map, f, nu.points,
                                              nu.log_derivs, orbit.horizon,
                                              workers);
  double z = log_sum_exp(sums);
  nu.log_weights.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) nu.log_weights[i] = sums[i] - z;
  return nu;
}

double ensemble_mean(const MapEnsemble& nu, const MapPotential& g, int workers) {
  std::vector<double> pair(nu.points.size());
  if (g.is_kt()) {
    for (std::size_t i = 0; i < pair.size(); ++i) {
      if (nu.log_derivs[i] == kNegInf && g.t != 0.0) {
        throw DerivativeVanishes("ensemble_mean: k_t pairing at critical orbit");
      }
      pair[i] = g.t == 0.0 ? 0.0 : -g.t * nu.log_derivs[i] / nu.horizon;
    }
  } else {
    parallel_for(pair.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        pair[i] = birkhoff_sum(nu.map, g, nu.points[i], nu.horizon) / nu.horizon;
      }
    });
  }
  KahanSum acc;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    acc.add(std::exp(nu.log_weights[i]) * pair[i]);
  }
  return acc.value();
}

OrbitDerivCache cache_log_derivs(const OrbitSet& orbit, int workers) {
  OrbitDerivCache c{orbit.map, orbit.method, orbit.horizon, orbit.points, {}};
  c.log_derivs = log_derivs_of(orbit.map, orbit.points, orbit.horizon, workers);
  return c;
}

ShiftEnsemble gibbs_weights_shift(const ShiftSpec& spec, const Box& box,
                                  Extension ext, std::uint8_t background,
                                  const ShiftPotential& f, int workers) {
  long count = config_count(spec, box);
  std::vector<double> sums(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   BoxConfig cfg = config_at(spec, box, ext, background,
                                             static_cast<long>(i));
                   sums[i] = birkhoff_sum_shift(f, cfg);
                 }
               });
  double z = log_sum_exp(sums);
  for (double& s : sums) s -= z;
  return ShiftEnsemble{spec, box, ext, background, std::move(sums), f.name};
}

double ensemble_mean_shift(const ShiftEnsemble& nu, const ShiftPotential& g,
                           int workers) {
  std::size_t count = nu.log_weights.size();
  std::vector<double> pair(count);
  double vol = static_cast<double>(nu.box.volume());
  parallel_for(count, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      BoxConfig cfg = config_at(nu.spec, nu.box, nu.extension, nu.background,
                                static_cast<long>(i));
      pair[i] = birkhoff_sum_shift(g, cfg) / vol;
    }
  });
  KahanSum acc;
  for (std::size_t i = 0; i < count; ++i) {
    acc.add(std::exp(nu.log_weights[i]) * pair[i]);
  }
  return acc.value();
}

TestFamily TestFamily::default_family() {
  TestFamily fam;
  fam.members.push_back(MapPotential::constant(1.0));
  fam.scales.push_back(2.0);
  for (int j = 1; j <= 4; ++j) {
    double scale = 1.0 + std::pow(1.3, j);
    fam.members.push_back(MapPotential::re_power(j));
    fam.scales.push_back(scale);
    fam.members.push_back(MapPotential::im_power(j));
    fam.scales.push_back(scale);
  }
  return fam;
}

std::vector<double> pairings(const MapSpec& map, const TestFamily& fam, Cx y,
                             int n) {
  std::vector<KahanSum> acc(fam.members.size());
  Cx w = y;
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < fam.members.size(); ++j) {
      acc[j].add(fam.members[j].eval(map, w));
    }
    w = apply(map, w);
  }
  std::vector<double> out(fam.members.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j].value() / n;
  return out;
}

ReferenceMeasure ReferenceMeasure::uniform_circle(const TestFamily& fam) {
  constexpr int kNodes = 4096;
  ReferenceMeasure ref;
  ref.label = "uniform_circle";
  ref.values.resize(fam.members.size());
  MapSpec dummy = MapSpec::power(2);
  for (std::size_t j = 0; j < fam.members.size(); ++j) {
    KahanSum acc;
    for (int k = 0; k < kNodes; ++k) {
      double theta = 6.283185307179586476925286766559 * k / kNodes;
      acc.add(fam.members[j].eval(dummy, Cx{std::cos(theta), std::sin(theta)}));
    }
    ref.values[j] = acc.value() / kNodes;
    if (std::abs(ref.values[j]) < 1e-14) ref.values[j] = 0.0;
  }
  return ref;
}

double weakstar_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> scales) {
  if (a.size() != b.size() || a.size() != scales.size()) {
    throw Error("weakstar_distance: pairing vectors of different lengths");
  }
  double dist = 0.0;
  double weight = 0.5;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dist += weight * std::min(1.0, std::abs(a[j] - b[j]) / scales[j]);
    weight *= 0.5;
  }
  return dist;
}

ShiftTestFamily ShiftTestFamily::single_site(const ShiftSpec& spec) {
  ShiftTestFamily fam;
  for (int s = 1; s < spec.alphabet; ++s) {
    std::vector<double> values(spec.alphabet, 0.0);
    values[s] = 1.0;
    fam.members.push_back(ShiftPotential::single_site(
        spec.alphabet, std::move(values), "ind" + std::to_string(s)));
    fam.scales.push_back(2.0);
  }
  return fam;
}

std::vector<double> shift_pairings(const ShiftTestFamily& fam,
                                   const BoxConfig& cfg) {
  std::vector<double> out(fam.members.size());
  double vol = static_cast<double>(cfg.box.volume());
  for (std::size_t j = 0; j < fam.members.size(); ++j) {
    out[j] = birkhoff_sum_shift(fam.members[j], cfg) / vol;
  }
  return out;
}

ReferenceMeasure bernoulli_reference(const ShiftTestFamily& fam,
                                     const std::vector<double>& probs) {
  ReferenceMeasure ref;
  ref.label = "bernoulli";
  for (const auto& member : fam.members) {
    if (member.window.size() != 1) {
      throw Error("bernoulli_reference: only single-site families supported");
    }
    double v = 0.0;
    for (std::size_t s = 0; s < probs.size(); ++s) v += probs[s] * member.table[s];
    ref.values.push_back(v);
  }
  return ref;
}

}  // namespace ratelab

// ratelab command-line tool: pressure estimators, rate functions, and
// large-deviation tables for rational maps and full shifts.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ratelab/deviation.hpp"
#include "ratelab/io.hpp"
#include "ratelab/numeric.hpp"
#include "ratelab/pressure.hpp"
#include "ratelab/ratefn.hpp"
#include "ratelab/selftest.hpp"

namespace {

using namespace ratelab;

// A usage-level problem (bad flag combination, malformed value): exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  int workers = 0;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out = "-";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--workers", c.workers, "Worker threads (0 = auto)");
  cmd->add_option("--seed", c.seed, "PRNG seed");
  cmd->add_option("--format", c.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "Output path ('-' = stdout)");
}

int workers_of(const CommonOpts& c) {
  return c.workers > 0 ? c.workers : default_workers();
}

void emit(const CommonOpts& c, const MetaMap& meta,
          const std::vector<std::string>& columns,
          const std::vector<std::vector<std::string>>& rows) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (c.out != "-") {
    file.open(c.out);
    if (!file) throw Error("cannot open output file: " + c.out);
    os = &file;
  }
  if (c.format == "json") {
    write_json(*os, meta, columns, rows);
  } else {
    write_csv(*os, meta, columns, rows);
  }
}

OrbitMethod parse_method(const std::string& s) {
  if (s == "periodic") return OrbitMethod::Periodic;
  if (s == "preimage") return OrbitMethod::Preimage;
  if (s == "separated") return OrbitMethod::Separated;
  throw UsageError("unknown orbit method: " + s);
}

MapSpec parse_map(const std::string& s, bool allow_unsafe = false) {
  MapSpec map = [&] {
    try {
      return parse_map_label(s);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  // |c| < 0.25 keeps the Julia set a quasicircle; anything else is accepted
  // only behind --unsafe, with no correctness claims.
  if (map.family == MapFamily::Quadratic && std::abs(map.c) >= 0.25) {
    if (!allow_unsafe) {
      throw UsageError("quadratic parameter |c| >= 0.25 is outside the certified "
                       "hyperbolic regime; pass --unsafe to proceed anyway");
    }
    double probe = hyperbolicity_probe(map, 12, 200, 1);
    std::cerr << "warning: uncertified parameter c; hyperbolicity probe = "
              << probe << (probe <= 0.0 ? " (NOT expanding)" : "") << "\n";
  }
  return map;
}

// "m=2,l=1" with optional ",delta=0.5".
ShiftSpec parse_shift(const std::string& s) {
  int m = 0, l = 0;
  double delta = 0.5;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("bad shift spec: " + s);
    std::string key = part.substr(0, eq), val = part.substr(eq + 1);
    try {
      if (key == "m") {
        m = std::stoi(val);
      } else if (key == "l") {
        l = std::stoi(val);
      } else if (key == "delta") {
        delta = std::stod(val);
      } else {
        throw UsageError("unknown shift spec key: " + key);
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad shift spec value: " + part);
    }
  }
  if (m == 0 || l == 0) throw UsageError("shift spec needs m= and l=: " + s);
  try {
    return ShiftSpec::make(m, l, delta);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// "10" (l=1) or "4x5" (l=2).
Box parse_box(const std::string& s, int dim) {
  try {
    auto x = s.find('x');
    if (x == std::string::npos) {
      if (dim != 1) throw UsageError("2-d shift needs a box like 4x5");
      return Box::line(std::stoi(s));
    }
    if (dim != 2) throw UsageError("1-d shift needs a box like 10");
    return Box::rect(std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1)));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad box: " + s);
  }
}

// "single:v0,v1,..." | "nn:beta" | "ising:beta" | "zero" | "file:path".
ShiftPotential parse_shift_potential(const std::string& s, const ShiftSpec& spec) {
  auto colon = s.find(':');
  std::string kind = colon == std::string::npos ? s : s.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (kind == "zero") return ShiftPotential::zero(spec.alphabet, spec.dim);
    if (kind == "single") {
      std::vector<double> values;
      std::stringstream ss(arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
      return ShiftPotential::single_site(spec.alphabet, std::move(values));
    }
    if (kind == "nn") {
      if (spec.dim != 1) throw UsageError("nn potential is 1-d; use ising for l=2");
      return ShiftPotential::nearest_neighbor(spec.alphabet, std::stod(arg));
    }
    if (kind == "ising") {
      if (spec.dim != 2) throw UsageError("ising potential is 2-d");
      return ShiftPotential::ising2d(spec.alphabet, std::stod(arg));
    }
    if (kind == "file") {
      std::ifstream in(arg);
      if (!in) throw UsageError("cannot read potential file: " + arg);
      std::stringstream buf;
      buf << in.rdbuf();
      return shift_potential_from_json(buf.str(), spec.alphabet);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("bad shift potential '" + s + "': " + e.what());
  }
  throw UsageError("unknown shift potential kind: " + kind);
}

// "kt:0.5" | "re<j>:scale" | "im<j>:scale" | "const:a" | "zero".
MapPotential parse_map_potential(const std::string& s) {
  auto colon = s.find(':');
  std::string kind = colon == std::string::npos ? s : s.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (kind == "zero") return MapPotential::constant(0.0);
    if (kind == "kt") return MapPotential::kt(std::stod(arg));
    if (kind == "const") return MapPotential::constant(std::stod(arg));
    if (kind.size() == 3 && (kind.substr(0, 2) == "re" || kind.substr(0, 2) == "im")) {
      int j = kind[2] - '0';
      double scale = arg.empty() ? 1.0 : std::stod(arg);
      MapPotential base = kind[0] == 'r' ? MapPotential::re_power(j)
                                         : MapPotential::im_power(j);
      return scale == 1.0 ? base : base.scaled(scale);
    }
  } catch (const std::exception& e) {
    throw UsageError("bad map potential '" + s + "': " + e.what());
  }
  throw UsageError("unknown map potential: " + s);
}

std::vector<double> parse_grid(const std::string& s) {
  // "lo:hi:step"
  double lo, hi, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0 ||
      hi <= lo) {
    throw UsageError("bad grid spec (want lo:hi:step): " + s);
  }
  std::vector<double> g;
  for (double t = lo; t <= hi + 1e-12; t += step) g.push_back(t);
  return g;
}

std::string join_cmdline(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

// ---- pressure ---------------------------------------------------------------

struct PressureArgs {
  CommonOpts common;
  std::string map_str, shift_str, method = "periodic", potential, box_str;
  std::string extension = "periodic";
  std::string orbit_json;
  int n = 10;
  std::vector<double> ts;
  double eps = 0.05;
  int sample = 100000;
  bool oracle = false;
  bool diagnose = false;
  bool unsafe = false;
  std::string curve_grid;  // emit a sampled curve t,P,dP_est instead
  std::string g_str;
};

int cmd_pressure(const PressureArgs& a, const std::string& cmdline) {
  int w = workers_of(a.common);
  MetaMap meta{{"cmd", cmdline}};

  if (!a.shift_str.empty()) {
    ShiftSpec spec = parse_shift(a.shift_str);
    if (a.box_str.empty()) throw UsageError("--box required for shift pressure");
    Box box = parse_box(a.box_str, spec.dim);
    ShiftPotential pot = parse_shift_potential(
        a.potential.empty() ? "zero" : a.potential, spec);
    Extension ext = Extension::Periodic;
    std::uint8_t bg = 0;
    if (a.extension.rfind("padded", 0) == 0) {
      ext = Extension::Padded;
      auto colon = a.extension.find(':');
      if (colon != std::string::npos) {
        bg = static_cast<std::uint8_t>(std::stoi(a.extension.substr(colon + 1)));
      }
    } else if (a.extension != "periodic") {
      throw UsageError("extension must be periodic or padded[:bg]");
    }
    PressureEstimate est = shift_pressure_estimate(spec, box, pot, ext, bg, w);
    meta.push_back({"shift", a.shift_str});
    meta.push_back({"box", box.label()});
    meta.push_back({"potential", pot.name});
    meta.push_back({"extension", a.extension});
    meta.push_back({"workers", std::to_string(w)});
    std::vector<std::string> cols{"estimate"};
    std::vector<std::string> row{format_double(est.value)};
    if (a.oracle) {
      double tm = transfer_matrix_pressure(spec, pot);
      cols.push_back("transfer_oracle");
      cols.push_back("gap");
      row.push_back(format_double(tm));
      row.push_back(format_double(est.value - tm));
    }
    if (a.diagnose) {
      // Boundary-effect diagnostic: the two extension rules differ by
      // O(|boundary| / |box|).
      Extension other = ext == Extension::Periodic ? Extension::Padded
                                                   : Extension::Periodic;
      double alt = shift_pressure_estimate(spec, box, pot, other, bg, w).value;
      cols.push_back("extension_gap");
      row.push_back(format_double(std::abs(est.value - alt)));
    }
    emit(a.common, meta, cols, {row});
    return 0;
  }

  if (a.map_str.empty()) throw UsageError("need --map or --shift");
  MapSpec map = parse_map(a.map_str, a.unsafe);
  OrbitMethod method = parse_method(a.method);
  SeparatedParams sep{a.eps, a.sample, a.common.seed};

  OrbitSet orbit;
  if (!a.orbit_json.empty()) {
    std::ifstream in(a.orbit_json);
    if (!in) throw UsageError("cannot read orbit cache: " + a.orbit_json);
    std::stringstream buf;
    buf << in.rdbuf();
    orbit = orbitset_from_json(buf.str());
  } else {
    orbit = build_orbit(map, method, a.n, sep);
  }
  for (const auto& warning : orbit.warnings) std::cerr << "warning: " << warning << "\n";

  meta.push_back({"map", map.label()});
  meta.push_back({"method", orbit_method_name(orbit.method)});
  meta.push_back({"n", std::to_string(orbit.horizon)});
  meta.push_back({"count", std::to_string(orbit.points.size())});
  meta.push_back({"seed", std::to_string(a.common.seed)});
  meta.push_back({"workers", std::to_string(w)});

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> cols;
  if (!a.curve_grid.empty()) {
    // Sampled curve emission: t, P, dP_est (blank at the stencil margins).
    OrbitDerivCache cache = cache_log_derivs(orbit, w);
    PressureCurve curve = pressure_curve(cache, parse_grid(a.curve_grid), w);
    meta.push_back({"grid", a.curve_grid});
    cols = {"t", "P", "dP_est"};
    for (int k = 0; k < curve.size(); ++k) {
      std::vector<std::string> row{format_double(curve.t[k]),
                                   format_double(curve.P[k])};
      if (k >= 2 && k + 2 < curve.size()) {
        row.push_back(format_double(dP(curve, curve.t[k])));
      } else {
        row.push_back("");
      }
      rows.push_back(std::move(row));
    }
    emit(a.common, meta, cols, rows);
    return 0;
  }
  if (!a.g_str.empty()) {
    MapPotential g = parse_map_potential(a.g_str);
    PressureEstimate est = pressure_estimate(orbit, g, w);
    meta.push_back({"potential", g.name});
    cols = {"estimate"};
    rows.push_back({format_double(est.value)});
  } else {
    std::vector<double> ts = a.ts.empty() ? std::vector<double>{0.0} : a.ts;
    OrbitDerivCache cache = cache_log_derivs(orbit, w);
    std::optional<OrbitDerivCache> prev;
    if (a.diagnose && orbit.horizon > 1 && a.orbit_json.empty()) {
      prev = cache_log_derivs(build_orbit(map, method, orbit.horizon - 1, sep), w);
    }
    cols = {"t", "estimate"};
    bool power_oracle = a.oracle && map.family == MapFamily::Power;
    if (power_oracle) {
      cols.push_back("oracle");
      cols.push_back("gap");
    }
    if (prev) cols.push_back("succ_diff");
    for (double t : ts) {
      double est = pressure_estimate_kt(cache, t);
      std::vector<std::string> row{format_double(t), format_double(est)};
      if (power_oracle) {
        double exact = (1.0 - t) * std::log(static_cast<double>(map.degree));
        row.push_back(format_double(exact));
        row.push_back(format_double(est - exact));
      }
      if (prev) {
        row.push_back(format_double(std::abs(est - pressure_estimate_kt(*prev, t))));
      }
      rows.push_back(std::move(row));
    }
  }
  emit(a.common, meta, cols, rows);
  return 0;
}

// ---- rate-curve -------------------------------------------------------------

struct RateArgs {
  CommonOpts common;
  std::string map_str, method = "periodic", grid = "-3:3:0.05", x_grid = "auto";
  int n = 12;
  double t = 0.0;
  bool dual_check = false;
  double eps = 0.05;
  int sample = 100000;
  bool unsafe = false;
};

int cmd_rate_curve(const RateArgs& a, const std::string& cmdline) {
  int w = workers_of(a.common);
  if (a.map_str.empty()) throw UsageError("need --map");
  MapSpec map = parse_map(a.map_str, a.unsafe);
  SeparatedParams sep{a.eps, a.sample, a.common.seed};
  PressureCurve curve =
      pressure_curve(map, parse_method(a.method), a.n, parse_grid(a.grid), sep, w);

  std::vector<double> xs;
  bool degenerate = curve_degenerate(curve);
  if (a.x_grid == "auto") {
    if (degenerate) {
      double chi = degenerate_chi(curve);
      xs = {chi - 0.1, chi, chi + 0.1};
    } else {
      auto [lo, hi] = chi_range(curve);
      double margin = 0.02 * (hi - lo);
      xs = linspace(lo + margin, hi - margin, 40);
    }
  } else {
    double lo, hi;
    int count;
    if (std::sscanf(a.x_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
        count < 1) {
      throw UsageError("bad x-grid (want lo:hi:count or auto): " + a.x_grid);
    }
    xs = linspace(lo, hi, count);
  }

  MetaMap meta{{"cmd", cmdline},
               {"map", map.label()},
               {"method", a.method},
               {"n", std::to_string(a.n)},
               {"t", format_double(a.t)},
               {"grid", a.grid},
               {"degenerate", degenerate ? "1" : "0"},
               {"workers", std::to_string(w)}};
  std::vector<std::string> cols{"x", "I", "I_inf", "s_x", "h_s"};
  if (a.dual_check) {
    cols.push_back("dual");
    cols.push_back("dual_gap");
  }
  std::vector<std::vector<std::string>> rows;
  for (double x : xs) {
    RateValue rv = rate_level1(curve, a.t, x);
    std::vector<std::string> row{format_double(x), format_double(rv.value),
                                 rv.infinite ? "1" : "0"};
    if (!rv.infinite && !degenerate) {
      double s = solve_s_x(curve, x);
      row.push_back(format_double(s));
      row.push_back(format_double(entropy_of_s(curve, s)));
    } else {
      row.push_back("");
      row.push_back("");
    }
    if (a.dual_check) {
      RateValue dual = legendre_sup(curve, a.t, x);
      row.push_back(format_double(dual.value));
      row.push_back(rv.infinite || dual.infinite
                        ? ""
                        : format_double(rv.value - dual.value));
    }
    rows.push_back(std::move(row));
  }
  emit(a.common, meta, cols, rows);
  return 0;
}

// ---- deviation --------------------------------------------------------------

struct DeviationArgs {
  CommonOpts common;
  std::string kind = "prob";
  std::string map_str, shift_str, method = "periodic";
  std::string potential;    // ensemble potential f (shift) / via --t for maps
  std::string k_str;        // observable (shift: potential string)
  std::vector<int> ns;
  double t = 0.0;
  std::vector<double> eps_list;
  std::vector<double> x_list;
  std::string side = "above";
  std::optional<double> center;
  bool predict = false;
  std::string grid = "-3:3:0.05";
  std::string ref = "uniform";
  double eps_sep = 0.05;
  int sample = 100000;
  bool unsafe = false;
};

int cmd_deviation(const DeviationArgs& a, const std::string& cmdline) {
  int w = workers_of(a.common);
  TailSide side = a.side == "below" ? TailSide::Below : TailSide::Above;
  if (a.side != "above" && a.side != "below") {
    throw UsageError("side must be above or below");
  }
  MetaMap meta{{"cmd", cmdline}, {"kind", a.kind}, {"workers", std::to_string(w)}};
  std::vector<std::string> cols{"n", "eps_or_x", "estimate", "prediction", "gap",
                                "event_count"};
  std::vector<DeviationReport> reports;

  if (!a.shift_str.empty()) {
    ShiftSpec spec = parse_shift(a.shift_str);
    ShiftPotential f =
        parse_shift_potential(a.potential.empty() ? "zero" : a.potential, spec);
    meta.push_back({"shift", a.shift_str});
    meta.push_back({"potential", f.name});
    if (a.ns.empty()) throw UsageError("need --n horizon(s)");
    for (int n : a.ns) {
      Box box = spec.dim == 1 ? Box::line(n) : Box::rect(n, n);
      if (a.kind == "prob") {
        if (!a.center.has_value()) throw UsageError("prob needs --center");
        ShiftPotential k =
            parse_shift_potential(a.k_str.empty() ? "single:0,1" : a.k_str, spec);
        ShiftEnsemble nu =
            gibbs_weights_shift(spec, box, Extension::Periodic, 0, f, w);
        for (double eps : a.eps_list) {
          reports.push_back(deviation_prob_shift(nu, k, *a.center, eps, w));
        }
      } else if (a.kind == "ball") {
        ShiftTestFamily fam = ShiftTestFamily::single_site(spec);
        meta.push_back({"family", "single-site"});
        ReferenceMeasure refm = [&] {
          if (a.ref.rfind("bernoulli:", 0) == 0) {
            double p = std::stod(a.ref.substr(10));
            return bernoulli_reference(fam, {1.0 - p, p});
          }
          throw UsageError("shift ball reference must be bernoulli:<p>");
        }();
        for (double eps : a.eps_list) {
          DeviationReport rep = entropy_by_ball_counting_shift(
              spec, box, Extension::Periodic, 0, refm, eps, fam, f, 0.0, w);
          if (a.predict && a.ref.rfind("bernoulli:", 0) == 0) {
            double p = std::stod(a.ref.substr(10));
            rep.prediction = -p * std::log(p) - (1 - p) * std::log(1 - p);
          }
          reports.push_back(rep);
        }
      } else {
        throw UsageError("shift deviation supports kind prob|ball");
      }
    }
    emit(a.common, meta, cols, report_rows(reports, "eps"));
    return 0;
  }

  if (a.map_str.empty()) throw UsageError("need --map or --shift");
  MapSpec map = parse_map(a.map_str, a.unsafe);
  OrbitMethod method = parse_method(a.method);
  SeparatedParams sep{a.eps_sep, a.sample, a.common.seed};
  meta.push_back({"map", map.label()});
  meta.push_back({"method", a.method});
  meta.push_back({"t", format_double(a.t)});
  if (a.ns.empty()) throw UsageError("need --n horizon(s)");

  std::optional<PressureCurve> curve;
  if (a.predict || (a.kind == "prob" && !a.center.has_value())) {
    curve = pressure_curve(map, method, a.ns.back(), parse_grid(a.grid), sep, w);
  }

  for (int n : a.ns) {
    OrbitSet orbit = build_orbit(map, method, n, sep);
    OrbitDerivCache cache = cache_log_derivs(orbit, w);
    if (a.kind == "prob") {
      MapEnsemble nu = gibbs_weights(orbit, MapPotential::kt(a.t), w);
      double center = a.center.has_value()
                          ? *a.center
                          : (curve_degenerate(*curve) ? degenerate_chi(*curve)
                                                      : -dP(*curve, a.t));
      for (double eps : a.eps_list) {
        DeviationReport rep =
            deviation_prob(nu, MapPotential::kt(-1.0), center, eps, w);
        if (a.predict && curve) {
          attach_rate_prediction(rep, *curve, a.t, center, eps);
        }
        reports.push_back(rep);
      }
    } else if (a.kind == "lyapunov" || a.kind == "counting") {
      for (double x : a.x_list) {
        DeviationReport rep =
            a.kind == "lyapunov"
                ? lyapunov_tail_weighted(cache, a.t, x, side)
                : entropy_by_counting(cache, x, side);
        if (a.predict && curve) {
          attach_tail_prediction(rep, *curve, a.kind == "lyapunov" ? a.t : 0.0, x,
                                 side);
        }
        reports.push_back(rep);
      }
    } else if (a.kind == "ball") {
      if (a.ref != "uniform") {
        throw UsageError("map ball reference must be uniform");
      }
      TestFamily fam = TestFamily::default_family();
      if (n == a.ns.front()) {
        meta.push_back({"family", "const1,re_z1..4,im_z1..4"});
      }
      ReferenceMeasure refm = ReferenceMeasure::uniform_circle(fam);
      for (double eps : a.eps_list) {
        DeviationReport rep = entropy_by_ball_counting(
            orbit, refm, eps, fam, MapPotential::constant(0.0), 0.0, w);
        if (a.predict) {
          rep.prediction = std::log(static_cast<double>(map.degree));
        }
        reports.push_back(rep);
      }
    } else {
      throw UsageError("kind must be prob|lyapunov|counting|ball");
    }
  }
  emit(a.common, meta, cols,
       report_rows(reports, a.kind == "prob" || a.kind == "ball" ? "eps" : "x"));
  return 0;
}

// ---- orbit ------------------------------------------------------------------

struct OrbitArgs {
  CommonOpts common;
  std::string map_str, method = "periodic";
  int n = 8;
  double eps = 0.05;
  int sample = 100000;
  std::string base;
  bool unsafe = false;
};

int cmd_orbit(const OrbitArgs& a) {
  if (a.map_str.empty()) throw UsageError("need --map");
  MapSpec map = parse_map(a.map_str, a.unsafe);
  SeparatedParams sep{a.eps, a.sample, a.common.seed};
  std::optional<Cx> base;
  if (!a.base.empty()) {
    double re = 0, im = 0;
    if (std::sscanf(a.base.c_str(), "%lf,%lf", &re, &im) < 1) {
      throw UsageError("bad base point: " + a.base);
    }
    base = Cx{re, im};
  }
  OrbitSet orbit = build_orbit(map, parse_method(a.method), a.n, sep,
                               base ? &*base : nullptr);
  for (const auto& warning : orbit.warnings) std::cerr << "warning: " << warning << "\n";
  std::string text = orbitset_to_json(orbit);
  if (a.common.out == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream f(a.common.out);
    if (!f) throw Error("cannot open output file: " + a.common.out);
    f << text << "\n";
  }
  return 0;
}

// ---- selftest ---------------------------------------------------------------

int cmd_selftest(const std::string& filter, int workers) {
  auto results = run_acceptance(filter, workers);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-26s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str(), r.seconds);
    all = all && r.pass;
  }
  if (results.empty()) {
    std::printf("no criteria match filter\n");
    return 2;
  }
  std::printf("%s\n", all ? "all criteria passed" : "FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pressure, rate functions, and large-deviation estimators for "
               "hyperbolic rational maps and multidimensional full shifts"};
  app.require_subcommand(1);
  std::string cmdline = join_cmdline(argc, argv);

  PressureArgs pa;
  auto* pressure = app.add_subcommand("pressure", "Pressure estimates");
  add_common(pressure, pa.common);
  pressure->add_option("--map", pa.map_str, "powermap:<d> or quadratic:<c>");
  pressure->add_option("--shift", pa.shift_str, "m=<m>,l=<l>[,delta=<d>]");
  pressure->add_option("--method", pa.method, "periodic|preimage|separated");
  pressure->add_option("--n", pa.n, "Horizon");
  pressure->add_option("--t", pa.ts, "k_t parameters (repeatable)");
  pressure->add_option("--g", pa.g_str, "Map potential (kt:<t>|re<j>:<a>|im<j>:<a>|const:<a>)");
  pressure->add_option("--potential", pa.potential,
                       "Shift potential (single:v0,v1|nn:b|ising:b|zero|file:p)");
  pressure->add_option("--box", pa.box_str, "Shift box (10 or 4x5)");
  pressure->add_option("--extension", pa.extension, "periodic|padded[:bg]");
  pressure->add_option("--eps", pa.eps, "Separation eps");
  pressure->add_option("--sample", pa.sample, "Julia sample size");
  pressure->add_option("--orbit-json", pa.orbit_json, "Load a cached orbit set");
  pressure->add_flag("--oracle", pa.oracle, "Attach the exact oracle value");
  pressure->add_flag("--diagnose", pa.diagnose,
                     "Attach the successive difference |est_n - est_{n-1}|");
  pressure->add_option("--curve", pa.curve_grid,
                       "Emit a sampled curve t,P,dP_est over grid lo:hi:step");
  pressure->add_flag("--unsafe", pa.unsafe, "Allow uncertified quadratic parameters");

  RateArgs ra;
  auto* rate = app.add_subcommand("rate-curve", "Level-1 rate function tables");
  add_common(rate, ra.common);
  rate->add_option("--map", ra.map_str, "powermap:<d> or quadratic:<c>")->required();
  rate->add_option("--method", ra.method, "periodic|preimage|separated");
  rate->add_option("--n", ra.n, "Horizon");
  rate->add_option("--t", ra.t, "Ensemble potential parameter t (f = k_t)");
  rate->add_option("--grid", ra.grid, "Pressure t-grid lo:hi:step");
  rate->add_option("--x-grid", ra.x_grid, "x grid: auto or lo:hi:count");
  rate->add_flag("--dual-check", ra.dual_check, "Also evaluate the Legendre route");
  rate->add_option("--eps", ra.eps, "Separation eps");
  rate->add_option("--sample", ra.sample, "Julia sample size");
  rate->add_flag("--unsafe", ra.unsafe, "Allow uncertified quadratic parameters");

  DeviationArgs da;
  auto* dev = app.add_subcommand("deviation", "Deviation and tail estimates");
  add_common(dev, da.common);
  dev->add_option("--kind", da.kind, "prob|lyapunov|counting|ball");
  dev->add_option("--map", da.map_str, "powermap:<d> or quadratic:<c>");
  dev->add_option("--shift", da.shift_str, "m=<m>,l=<l>");
  dev->add_option("--method", da.method, "periodic|preimage|separated");
  dev->add_option("--potential", da.potential, "Shift ensemble potential f");
  dev->add_option("--k", da.k_str, "Shift observable potential");
  dev->add_option("--n", da.ns, "Horizon(s), repeatable")->required();
  dev->add_option("--t", da.t, "k_t parameter (ensemble or tail weight)");
  dev->add_option("--eps", da.eps_list, "Deviation eps list");
  dev->add_option("--x", da.x_list, "Tail threshold list");
  dev->add_option("--side", da.side, "above|below");
  dev->add_option("--center", da.center, "Deviation center (default: chi(mu_t))");
  dev->add_flag("--predict", da.predict, "Attach rate-function predictions");
  dev->add_option("--grid", da.grid, "Pressure t-grid for predictions");
  dev->add_option("--ref", da.ref, "Ball reference: uniform|bernoulli:<p>");
  dev->add_option("--sep-eps", da.eps_sep, "Separation eps");
  dev->add_option("--sample", da.sample, "Julia sample size");
  dev->add_flag("--unsafe", da.unsafe, "Allow uncertified quadratic parameters");

  OrbitArgs oa;
  auto* orbit = app.add_subcommand("orbit", "Construct and cache an orbit set");
  add_common(orbit, oa.common);
  orbit->add_option("--map", oa.map_str, "powermap:<d> or quadratic:<c>")->required();
  orbit->add_option("--method", oa.method, "periodic|preimage|separated");
  orbit->add_option("--n", oa.n, "Horizon");
  orbit->add_option("--eps", oa.eps, "Separation eps");
  orbit->add_option("--sample", oa.sample, "Julia sample size");
  orbit->add_option("--base", oa.base, "Preimage base point re[,im]");
  orbit->add_flag("--unsafe", oa.unsafe, "Allow uncertified quadratic parameters");

  std::string st_filter;
  int st_workers = 0;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--filter", st_filter, "Only criteria whose name contains this");
  selftest->add_option("--workers", st_workers, "Worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    if (pressure->parsed()) return cmd_pressure(pa, cmdline);
    if (rate->parsed()) return cmd_rate_curve(ra, cmdline);
    if (dev->parsed()) return cmd_deviation(da, cmdline);
    if (orbit->parsed()) return cmd_orbit(oa);
    if (selftest->parsed()) return cmd_selftest(st_filter, st_workers);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

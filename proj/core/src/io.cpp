#include "ratelab/io.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "ratelab/numeric.hpp"

namespace ratelab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const MetaMap& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

void write_json(std::ostream& os, const MetaMap& meta,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m;
  for (const auto& [k, v] : meta) m[k] = v;
  j["meta"] = m;
  j["columns"] = columns;
  nlohmann::ordered_json out_rows = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      // Cells are preformatted numbers or strings; keep numbers as numbers.
      try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos == cell.size()) {
          r.push_back(v);
          continue;
        }
      } catch (...) {
      }
      r.push_back(cell);
    }
    out_rows.push_back(std::move(r));
  }
  j["rows"] = std::move(out_rows);
  os << j.dump(2) << "\n";
}

std::string orbitset_to_json(const OrbitSet& set) {
  nlohmann::ordered_json j;
  j["method"] = orbit_method_name(set.method);
  j["n"] = set.horizon;
  j["count"] = set.points.size();
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (Cx z : set.points) pts.push_back({z.real(), z.imag()});
  j["points"] = std::move(pts);
  nlohmann::ordered_json meta;
  meta["map"] = set.map.label();
  if (set.method == OrbitMethod::Separated) meta["eps"] = set.eps;
  if (set.method == OrbitMethod::Preimage) {
    meta["base"] = {set.base.real(), set.base.imag()};
  }
  j["meta"] = std::move(meta);
  return j.dump(2);
}

OrbitSet orbitset_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  OrbitSet set{OrbitMethod::Periodic, j.at("n").get<int>(),
               parse_map_label(j.at("meta").at("map").get<std::string>()),
               {}, 0.0, {0.0, 0.0}, {}};
  std::string method = j.at("method").get<std::string>();
  if (method == "periodic") {
    set.method = OrbitMethod::Periodic;
  } else if (method == "preimage") {
    set.method = OrbitMethod::Preimage;
    auto b = j.at("meta").at("base");
    set.base = Cx{b.at(0).get<double>(), b.at(1).get<double>()};
  } else if (method == "separated") {
    set.method = OrbitMethod::Separated;
    set.eps = j.at("meta").at("eps").get<double>();
  } else {
    throw Error("orbitset_from_json: unknown method " + method);
  }
  for (const auto& p : j.at("points")) {
    set.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  }
  if (set.points.size() != j.at("count").get<std::size_t>()) {
    throw Error("orbitset_from_json: count does not match points");
  }
  return set;
}

std::string ensemble_to_json(const MapEnsemble& nu, const TestFamily* fam,
                             int workers) {
  nlohmann::ordered_json j;
  j["horizon"] = nu.horizon;
  j["method"] = orbit_method_name(nu.method);
  j["f"] = nu.potential_label;
  j["atoms"] = nu.size();
  j["log_weights"] = nu.log_weights;
  nlohmann::ordered_json pair_obj;
  if (fam != nullptr) {
    std::vector<std::vector<double>> per_atom(nu.points.size());
    parallel_for(nu.points.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        per_atom[i] = pairings(nu.map, *fam, nu.points[i], nu.horizon);
      }
    });
    for (std::size_t g = 0; g < fam->members.size(); ++g) {
      std::vector<double> column(nu.points.size());
      for (std::size_t i = 0; i < column.size(); ++i) column[i] = per_atom[i][g];
      pair_obj[fam->members[g].name] = column;
    }
  }
  j["pairings"] = std::move(pair_obj);
  return j.dump();
}

std::vector<std::vector<std::string>> report_rows(
    const std::vector<DeviationReport>& reports,
    const std::string& threshold_kind) {
  static_cast<void>(threshold_kind);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::vector<std::string> row;
    row.push_back(std::to_string(r.horizon));
    row.push_back(format_double(r.threshold));
    row.push_back(r.empty_event ? "empty" : format_double(r.estimate));
    if (std::isnan(r.prediction)) {
      row.push_back("");
      row.push_back("");
    } else if (r.prediction_infinite) {
      row.push_back("-inf");
      row.push_back("");
    } else {
      row.push_back(format_double(r.prediction));
      row.push_back(r.empty_event ? "" : format_double(r.gap()));
    }
    row.push_back(std::to_string(r.event_count));
    rows.push_back(std::move(row));
  }
  return rows;
}

MapSpec parse_map_label(const std::string& label) {
  auto colon = label.find(':');
  if (colon == std::string::npos) {
    throw Error("map label must look like powermap:<d> or quadratic:<re>[,<im>]");
  }
  std::string family = label.substr(0, colon);
  std::string arg = label.substr(colon + 1);
  try {
    if (family == "powermap") {
      std::size_t pos = 0;
      int d = std::stoi(arg, &pos);
      if (pos != arg.size()) throw Error("trailing characters in degree");
      return MapSpec::power(d);
    }
    if (family == "quadratic") {
      double re = 0.0, im = 0.0;
      auto comma = arg.find(',');
      std::size_t pos = 0;
      if (comma == std::string::npos) {
        re = std::stod(arg, &pos);
        if (pos != arg.size()) throw Error("trailing characters in parameter");
      } else {
        std::string sre = arg.substr(0, comma), sim = arg.substr(comma + 1);
        re = std::stod(sre, &pos);
        if (pos != sre.size()) throw Error("trailing characters in parameter");
        im = std::stod(sim, &pos);
        if (pos != sim.size()) throw Error("trailing characters in parameter");
      }
      return MapSpec::quadratic(Cx{re, im});
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("could not parse map label: " + label);
  }
  throw Error("unknown map family in label: " + label);
}

}  // namespace ratelab

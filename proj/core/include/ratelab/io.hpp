#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ratelab/deviation.hpp"
#include "ratelab/gibbs.hpp"
#include "ratelab/orbitsets.hpp"
#include "ratelab/pressure.hpp"

namespace ratelab {

// Ordered key=value metadata embedded in every output so runs are
// self-describing and reproducible from their headers.
using MetaMap = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal representation ("%.17g"); identical across
// runs, so byte-level output determinism reduces to value determinism.
std::string format_double(double x);

// CSV with '#'-prefixed key=value metadata lines, then a header row.
void write_csv(std::ostream& os, const MetaMap& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

// JSON document {"meta": {...}, "columns": [...], "rows": [[...], ...]}.
void write_json(std::ostream& os, const MetaMap& meta,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows);

// {method, n, count, points: [[re, im], ...]} plus a meta block (map label,
// construction parameters) so cached sets can be reloaded.
std::string orbitset_to_json(const OrbitSet& set);
OrbitSet orbitset_from_json(const std::string& text);

// {horizon, method, f, atoms, log_weights, pairings: {label: [...]}}.
std::string ensemble_to_json(const MapEnsemble& nu, const TestFamily* fam,
                             int workers = 1);

std::vector<std::vector<std::string>> report_rows(
    const std::vector<DeviationReport>& reports,
    const std::string& threshold_kind);

MapSpec parse_map_label(const std::string& label);

}  // namespace ratelab

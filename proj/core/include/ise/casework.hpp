#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ise/analysis.hpp"

namespace ise {

struct CaseConfig {
  std::string name;
  std::filesystem::path feeder_file;
  Variant model = Variant::IV;
  std::uint64_t seed = 1;
  double line_fraction = 0.0;
  // Where the true DG outputs sit inside their bands (0 = lower edge,
  // 1 = upper edge); per-unit overrides on top of the default.
  double default_dg_fraction = 0.5;
  std::map<std::string, double> dg_truth_fraction;
  // Set: force every DG unit's metered flag, overriding the feeder document.
  std::optional<bool> dg_metered;
  Placements placements;
  ErrorSpec errors;
  SolverOptions solver;
  std::vector<std::string> solvers{"mko"};
  int trials = 0;
  int threads = 1;
  bool dump_system_file = false;
  std::filesystem::path out_dir;  // empty: caller picks a default
};

CaseConfig parse_case(const std::string& json_text, const std::string& origin);
// Feeder paths resolve relative to the config file's directory.
CaseConfig load_case(const std::filesystem::path& file);

struct CaseResult {
  Feeder feeder;  // line-parameter intervals applied
  TrueState truth;
  IseSystem system;
  std::vector<SolverReport> reports;
  std::vector<MethodRow> rows;  // one per report, plus one for the envelope
  std::optional<McEnvelope> mc;
  // Solvers that raised instead of producing a box (IGE pivot breakdown on
  // wide systems is expected); the case keeps running with the others.
  std::vector<std::pair<std::string, std::string>> failures;
};

// truth -> measurements -> assemble -> each selected solver -> metrics.
// Deterministic given the seed; wall-clock times live only in the reports'
// timing fields.
CaseResult run_case(const CaseConfig& cfg);

// report.csv, comparison.csv, summary.json are byte-identical across reruns
// of the same config and seed; wall-clock data goes to timings.json, which
// is exempt. The system dump is written when the config asks for it.
void write_reports(const CaseConfig& cfg, const CaseResult& res,
                   const std::filesystem::path& out_dir);

struct DimensionReport {
  std::size_t n = 0;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::size_t m() const { return m1 + m2; }
  std::size_t total() const { return m() + n; }
};

// Counts the assembled system without solving anything.
DimensionReport audit_dimensions(const Feeder& f, const Placements& pl);

// Audit table: this conversion, its single-phase reduction, and (when known
// for the feeder family) published reference dimensions with an explanation
// of any difference.
std::string dimension_text(const Feeder& f, const Placements& pl);

}  // namespace ise

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/catalog.hpp"

namespace solitonlab {

struct RunConfig {
  int samples = 64;
  uint64_t seed = 0;
  std::map<std::string, double> tol_overrides;  // per-check tolerance
  std::optional<double> margin;                 // overrides the entry margin
  std::string format = "table";                 // "table" or "json"
  std::string out_path;                         // empty writes to stdout
  bool parallel = true;  // serial sweep kept as the reference path
};

struct CheckResult {
  std::string name;
  std::string paper_ref;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Verdicts {
  double lambda = 0.0;
  std::string classification;
  bool trivial = false;
  bool gradient = false;
};

struct Report {
  std::string target;
  uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckResult> checks;  // sorted by check name
  Verdicts verdicts;

  bool pass() const;
  const CheckResult* find(const std::string& name) const;
};

/// Runs every check applicable to the entry's kind over seeded sample
/// points.  Deterministic given (entry, config); sweeps run on the
/// OpenMP pool unless config.parallel is false.
Report run_verify(const CatalogEntry& entry, const RunConfig& config);

struct SuiteReport {
  uint64_t seed = 0;
  std::vector<Report> targets;       // ordered by target name
  std::vector<CheckResult> theorems; // aggregate cross-target sections

  bool pass() const;
};

/// Runs the whole catalog plus the cross-pipeline aggregate sections.
SuiteReport run_suite(const RunConfig& config);

std::string default_check_reference(const std::string& name);
double default_check_tolerance(const std::string& name);

std::string to_json(const Report& r);
std::string to_json(const SuiteReport& r);
std::string to_table(const Report& r);
std::string to_table(const SuiteReport& r);

}  // namespace solitonlab

#pragma once

#include <set>
#include <string>
#include <vector>

#include "hrm/presets.hpp"
#include "hrm/solver.hpp"

namespace hrm {

struct OutputSpec {
  std::string dir = "out";
  std::string formats = "csv";
};

struct SweepSpec {
  std::vector<double> eps_list = {1e-2, 3.16e-3, 1e-3, 3.16e-4};
  bool precheck = true;
  bool synthetic = false;         // when true, inject errors = eps^synthetic_exponent
  double synthetic_exponent = 0.5;
};

/// Whole-run configuration, loadable from flat dotted key-value text.
struct RunConfig {
  EosModel eos;
  Grid1D grid;
  SolverConfig solver;
  PresetSpec preset;
  OutputSpec outputs;
  SweepSpec sweep;
  unsigned long long seed = 0;

  /// Keys that were explicitly present in the parsed source.
  std::set<std::string> explicit_keys;

  bool has(const std::string& key) const { return explicit_keys.count(key) > 0; }
  void validate() const;
};

/// Parse from text; throws ConfigError with a line number on bad input or
/// unknown keys, and a validation error naming the failing invariant.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical serialization: fixed key order, 17 significant digits.
std::string canonical_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace hrm

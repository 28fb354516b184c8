#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcg/bodies.hpp"

namespace bcg {

constexpr int kSchemaVersion = 1;

// Subcommand names, also the "experiment" values of a config.
const std::vector<std::string>& experiment_names();

struct Scenario {
  std::string id;
  std::string experiment;
  Field field = Field::Complex;
  int n = 2;
  double r = 2.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  // Resolved config: every budget is explicit here.
  nlohmann::json config;
  // JSON pointer -> 1-based source line.
  std::map<std::string, int> lines;
};

// Command-line values that win over the config.
struct Overrides {
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> field;
  std::optional<double> aspect;
  std::optional<double> r;
};

// Parses and validates a config. Throws SchemaError with the offending line.
Scenario parse_scenario(const std::string& text, const std::string& experiment, const Overrides& ov = {});
// Built-in scenario for a subcommand run without --config.
Scenario default_scenario(const std::string& experiment, const Overrides& ov = {});

// Body from a descriptor; `pointer` locates it in the source for errors.
ConvexBody build_body(const Scenario& s, const nlohmann::json& desc, const std::string& pointer);

struct ResultRow {
  std::string scenario_id;  // "<id>:<quantity>"
  Field field = Field::Real;
  int n = 0;
  double r = 0.0;
  Estimate value;
  double wall_time_s = 0.0;
};

struct RunResult {
  std::vector<ResultRow> rows;
  bool accepted = true;
  std::vector<std::string> notes;  // human-readable verdict lines
};

RunResult run_scenario(const Scenario& s);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
nlohmann::json manifest(const Scenario& s, const RunResult& r);

// 0 accepted, 2 acceptance failure.
inline int exit_code(const RunResult& r) { return r.accepted ? 0 : 2; }

}  // namespace bcg

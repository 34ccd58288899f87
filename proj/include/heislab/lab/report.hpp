#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "heislab/lab/manifest.hpp"

namespace heislab::lab {

struct Quantity {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

enum class Verdict { pass, fail, info };

/// An asserted (or, with Verdict::info, only reported) comparison.
/// `provenance` says where the expected value comes from: "exact",
/// "oracle", "fixture:<name>" or "statistical".
struct Comparison {
  std::string name;
  nlohmann::json expected;
  nlohmann::json observed;
  std::string relation;  // e.g. "|obs - exp| <= 3 sigma"
  std::string provenance;
  Verdict verdict = Verdict::info;
};

/// CSV table; cells are numbers (printed with %.17g) or text.
struct Table {
  std::string name;  // file stem suffix; "" for the main table
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row);
  std::string csv() const;
};

struct RunReport {
  ExperimentManifest manifest;
  std::vector<Quantity> quantities;
  std::vector<Comparison> comparisons;
  std::vector<Table> tables;
  /// Per-entry failures that did not abort the sweep.
  std::vector<std::string> errors;
  bool nonconverged = false;
  /// Gnuplot script body; data file names are substituted for {csv} and
  /// {csv:<table>}.
  std::string plot;
  std::string started_at;
  double wall_time = 0.0;

  void quantity(std::string name, double estimate, double std_error, std::int64_t samples, std::uint64_t seed);
  void compare(std::string name, nlohmann::json expected, nlohmann::json observed, std::string relation,
               std::string provenance, bool ok);
  void note(std::string name, nlohmann::json expected, nlohmann::json observed, std::string relation,
            std::string provenance);

  bool mismatch() const;
  /// 0 ok, 2 fixture or check mismatch, 3 solver nonconvergence.
  int exit_code() const;
  nlohmann::json to_json() const;
};

/// Writes <dir>/<name>.report.json, one CSV per table and <name>.gp, each via
/// a temporary file and rename. Returns the written paths.
std::vector<std::filesystem::path> write_artifacts(const RunReport& report, const std::filesystem::path& dir);

/// Writes `text` to `path` through a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

const char* to_string(Verdict v);

}  // namespace heislab::lab

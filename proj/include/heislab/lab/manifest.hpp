#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace heislab::lab {

inline constexpr int manifest_schema = 1;

/// Experiment commands, in CLI spelling.
const std::vector<std::string>& commands();

/// One experiment. `parameters` always holds every parameter of the
/// command, defaults filled in, so a stored manifest is self-contained.
struct ExperimentManifest {
  std::string name;
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output;  // empty: decided by the runner
  /// Directory that relative paths inside parameters resolve against.
  std::filesystem::path base_dir;

  /// {"schema","name","command","seed","workers","output","parameters"}.
  /// Unknown keys and parameters are rejected with schema_violation.
  static ExperimentManifest from_json(const nlohmann::json& j);
  static ExperimentManifest read(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  /// FNV-1a of the canonical JSON of everything that determines the numbers
  /// (schema, command, seed, parameters); 16 hex digits.
  std::string hash() const;
};

/// Default parameters of a command.
nlohmann::json default_parameters(const std::string& command);

/// Seed for entry `index` of a sweep, independent of scheduling.
std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace heislab::lab

#pragma once

#include <filesystem>

#include "heislab/lab/manifest.hpp"
#include "heislab/lab/report.hpp"

namespace heislab::lab {

struct RunOptions {
  /// Fixture file consulted by comparisons against recorded values.
  std::filesystem::path fixtures;
};

/// Dispatches the manifest to its command. Per-entry solver failures are
/// recorded in the report (errors, nonconverged) instead of thrown; invalid
/// parameters throw schema_violation.
RunReport run_experiment(const ExperimentManifest& manifest, const RunOptions& options);

/// Output directory: `cli_out` if set, else $HEISLAB_OUT, else the
/// manifest's `output`, else "heislab-out".
std::filesystem::path output_directory(const ExperimentManifest& manifest, const std::filesystem::path& cli_out);

}  // namespace heislab::lab

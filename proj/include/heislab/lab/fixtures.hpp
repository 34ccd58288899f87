#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "heislab/cuts/metric.hpp"

namespace heislab::lab {

inline constexpr int fixtures_schema = 1;

/// One recorded reference value and the oracle that produces it.
struct FixtureSpec {
  std::string name;
  /// Human-readable oracle description stored next to the value.
  std::string oracle;
  /// Full-budget oracle run (used by `fixtures regenerate --oracle`).
  std::function<nlohmann::json(int workers)> compute;
  /// Re-checks a stored value; returns the observation and sets `ok`.
  std::function<nlohmann::json(const nlohmann::json& stored, int workers, bool& ok, std::string& relation)> verify;
};

const std::vector<FixtureSpec>& fixture_registry();
const FixtureSpec& fixture_spec(const std::string& name);

/// {"schema":1,"version":N,"fixtures":{name:{"value":..,"oracle":..}}}.
class FixtureFile {
 public:
  static FixtureFile read(const std::filesystem::path& path);

  int version() const { return version_; }
  bool has(const std::string& name) const;
  /// The stored value; throws schema_violation when absent.
  const nlohmann::json& value(const std::string& name) const;
  const nlohmann::json& json() const { return doc_; }

  void set(const std::string& name, nlohmann::json value, const std::string& oracle);
  /// Bumps the version when any value changed since reading.
  void write(const std::filesystem::path& path);

 private:
  nlohmann::json doc_ = {{"schema", fixtures_schema}, {"version", 0}, {"fixtures", nlohmann::json::object()}};
  int version_ = 0;
  bool changed_ = false;
};

struct FixtureCheck {
  std::string name;
  nlohmann::json stored;
  nlohmann::json observed;
  std::string relation;
  bool ok = false;
};

/// Runs the verify oracle of every registered fixture (or those in `only`).
std::vector<FixtureCheck> verify_fixtures(const FixtureFile& file, const std::vector<std::string>& only,
                                          int workers);

/// Recomputes the selected fixtures at full budget into `file`.
void regenerate_fixtures(FixtureFile& file, const std::vector<std::string>& only, int workers);

/// Named metrics of the duality corpus.
std::vector<std::pair<std::string, cuts::FiniteMetric>> duality_corpus();

/// K_{2,3} path metric.
cuts::FiniteMetric k23_metric();

/// Crossing-count reference for the perimeter of {a <= 0} in B_1(e): the
/// fraction of `lines` sampled lines whose crossing with the plane a = 0
/// lies in the open ball (global normalization, so this is the kinematic
/// integral itself).
struct PerimeterReference {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t lines = 0;
  std::uint64_t seed = 0;
};
PerimeterReference halfspace_perimeter_reference(std::int64_t lines, std::uint64_t seed, int workers);

/// Smallest and largest cc_norm(g) / d_T(g) over g != e in the word ball.
std::pair<double, double> word_cc_band(int radius);

/// Column-oracle minimum of the bilinear set against half-spaces in
/// B_r((0,1,0)).
double bilinear_tau(double r, int resolution);

}  // namespace heislab::lab

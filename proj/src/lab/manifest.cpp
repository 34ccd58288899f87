#include "heislab/lab/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "heislab/error.hpp"
#include "heislab/random.hpp"

namespace heislab::lab {

using nlohmann::json;

namespace {

const json vertical_halfspace = {{"type", "halfspace"}, {"normal", {1.0, 0.0, 0.0}}, {"offset", 0.0}};

const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> table = {
      {"nm-scan",
       {{"region", vertical_halfspace},
        {"center", {0.0, 0.0, 0.0}},
        {"radii", {1.0}},
        {"lines", 10000},
        {"step", 0.0},
        {"normalization", "global"},
        {"expect", "none"},
        {"sigmas", 3.0}}},
      {"halfspace-fit",
       {{"region", {{"type", "bilinear"}}},
        {"center", {0.0, 1.0, 0.0}},
        {"radius", 0.9},
        {"budget", 20000},
        {"random_halfspaces", 0},
        {"expect", "none"},
        {"max_error", 0.02},
        {"sigmas", 3.0}}},
      {"stability-curve",
       {{"family", "bilinear-blend"},
        {"etas", {0.0, 0.25, 0.5, 0.75, 1.0}},
        {"center", {0.0, 1.0, 0.0}},
        {"radius", 0.9},
        {"lines", 4000},
        {"budget", 20000},
        {"sigmas", 3.0}}},
      {"kinematic-check",
       {{"region", vertical_halfspace},
        {"center", {0.0, 0.0, 0.0}},
        {"radii", {1.0, 2.0, 4.0}},
        {"lines", 10000},
        {"delta", 0.5},
        {"exponent", 3.0},
        {"exponent_tolerance", 0.15},
        {"sigmas", 3.0}}},
      {"distortion", {{"grid", 1}, {"points", 8}, {"trials", 1}}},
      {"gap-lab", {{"grids", {1, 2, 3}}, {"points", 8}, {"trials", 3}}},
      {"compression", {{"map", "identity"}, {"map_file", ""}, {"radius", 6}}},
      {"collapse-scan",
       {{"map", "identity"}, {"map_file", ""}, {"radius", 6}, {"threshold", 1.0}, {"fraction", 0.5}}},
  };
  return table;
}

const std::map<std::string, std::set<std::string>>& choices() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"normalization", {"global", "unit_mass"}},
      {"expect", {"none", "monotone", "halfspace", "gap"}},
      {"family", {"bilinear-blend", "paraboloid"}},
      {"map", {"identity", "horizontal", "file"}},
  };
  return table;
}

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::schema_violation, msg); }

// Integers given for real-valued defaults become reals, so the hash does
// not depend on how a number was spelled.
json coerce(const json& value, const json& like) {
  if (like.is_number_float() && value.is_number()) return value.get<double>();
  if (like.is_array() && !like.empty() && value.is_array()) {
    json out = json::array();
    for (const auto& v : value) out.push_back(coerce(v, like.front()));
    return out;
  }
  if (like.is_object() && value.is_object()) {
    json out = value;
    for (auto& [k, v] : out.items()) {
      if (like.contains(k)) v = coerce(v, like[k]);
    }
    return out;
  }
  return value;
}

// Same JSON kind as the default; integers stay integers.
bool same_kind(const json& value, const json& like) {
  if (like.is_number_integer()) return value.is_number_integer();
  if (like.is_number()) return value.is_number();
  if (like.is_array()) {
    if (!value.is_array()) return false;
    if (like.empty()) return true;
    for (const auto& v : value) {
      if (!same_kind(v, like.front())) return false;
    }
    return true;
  }
  return value.type() == like.type();
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> out;
    for (const auto& [name, params] : defaults()) out.push_back(name);
    return out;
  }();
  return list;
}

json default_parameters(const std::string& command) {
  auto it = defaults().find(command);
  if (it == defaults().end()) fail("unknown command '" + command + "'");
  return it->second;
}

std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t index) { return CounterRng(seed, index)(); }

ExperimentManifest ExperimentManifest::from_json(const json& j) {
  if (!j.is_object()) fail("manifest must be a JSON object");
  static const std::set<std::string> keys = {"schema", "name", "command", "seed", "workers", "output", "parameters"};
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) fail("unknown manifest field '" + key + "'");
  }
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != manifest_schema) {
    fail("manifest 'schema' must be " + std::to_string(manifest_schema));
  }
  ExperimentManifest m;
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    fail("manifest needs a nonempty string 'name'");
  }
  m.name = j["name"].get<std::string>();
  if (m.name.find_first_of("/\\") != std::string::npos || m.name == "." || m.name == "..") {
    fail("manifest name must be a plain file name");
  }
  if (!j.contains("command") || !j["command"].is_string()) fail("manifest needs a string 'command'");
  m.command = j["command"].get<std::string>();
  json params = default_parameters(m.command);
  if (!j.contains("seed") || !j["seed"].is_number_integer() || (!j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0)) {
    fail("manifest needs a nonnegative integer 'seed'");
  }
  m.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 1) fail("'workers' must be a positive integer");
    m.workers = j["workers"].get<int>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) fail("'output' must be a string");
    m.output = j["output"].get<std::string>();
  }
  if (j.contains("parameters")) {
    const json& given = j["parameters"];
    if (!given.is_object()) fail("'parameters' must be an object");
    for (const auto& [key, value] : given.items()) {
      if (!params.contains(key)) fail("unknown parameter '" + key + "' for " + m.command);
      if (!same_kind(value, params[key])) fail("parameter '" + key + "' has the wrong type");
      auto c = choices().find(key);
      if (c != choices().end() && !c->second.count(value.get<std::string>())) {
        fail("parameter '" + key + "' has unknown value '" + value.get<std::string>() + "'");
      }
      params[key] = coerce(value, params[key]);
    }
  }
  m.parameters = std::move(params);
  return m;
}

ExperimentManifest ExperimentManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string("manifest is not valid JSON: ") + e.what());
  }
  auto m = from_json(j);
  m.base_dir = path.parent_path();
  return m;
}

json ExperimentManifest::to_json() const {
  json j = {{"schema", manifest_schema}, {"name", name},       {"command", command},
            {"seed", seed},              {"workers", workers}, {"parameters", parameters}};
  if (!output.empty()) j["output"] = output;
  return j;
}

std::string ExperimentManifest::hash() const {
  const json key = {{"schema", manifest_schema}, {"command", command}, {"seed", seed}, {"parameters", parameters}};
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : key.dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace heislab::lab

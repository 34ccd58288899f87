#include "heislab/lab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <unistd.h>

#include "heislab/error.hpp"

namespace heislab::lab {

using nlohmann::json;

namespace {

std::string cell(const json& v) {
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) {
    const double x = v.get<double>();
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  if (v.is_null()) return "nan";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

// NaN and infinities are not JSON; they are stored as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string file_stem(const RunReport& r, const Table& t) {
  return t.name.empty() ? r.manifest.name : r.manifest.name + "." + t.name;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::info: return "INFO";
  }
  return "?";
}

void Table::add(std::vector<json> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += '\n';
  }
  return out;
}

void RunReport::quantity(std::string name, double estimate, double std_error, std::int64_t samples,
                         std::uint64_t seed) {
  quantities.push_back({std::move(name), estimate, std_error, samples, seed});
}

void RunReport::compare(std::string name, json expected, json observed, std::string relation,
                        std::string provenance, bool ok) {
  comparisons.push_back({std::move(name), std::move(expected), std::move(observed), std::move(relation),
                         std::move(provenance), ok ? Verdict::pass : Verdict::fail});
}

void RunReport::note(std::string name, json expected, json observed, std::string relation, std::string provenance) {
  comparisons.push_back({std::move(name), std::move(expected), std::move(observed), std::move(relation),
                         std::move(provenance), Verdict::info});
}

bool RunReport::mismatch() const {
  for (const auto& c : comparisons) {
    if (c.verdict == Verdict::fail) return true;
  }
  return false;
}

int RunReport::exit_code() const {
  if (nonconverged) return 3;
  return mismatch() ? 2 : 0;
}

json RunReport::to_json() const {
  json q = json::array();
  for (const auto& x : quantities) {
    q.push_back({{"name", x.name},
                 {"estimate", number(x.estimate)},
                 {"stderr", number(x.std_error)},
                 {"samples", x.samples},
                 {"seed", x.seed}});
  }
  json c = json::array();
  for (const auto& x : comparisons) {
    c.push_back({{"name", x.name},
                 {"expected", x.expected},
                 {"observed", x.observed},
                 {"relation", x.relation},
                 {"provenance", x.provenance},
                 {"verdict", to_string(x.verdict)}});
  }
  json files = json::array();
  for (const auto& t : tables) files.push_back(file_stem(*this, t) + ".csv");
  files.push_back(manifest.name + ".gp");
  const int code = exit_code();
  return {{"schema", manifest_schema},
          {"manifest", manifest.to_json()},
          {"manifest_hash", manifest.hash()},
          {"status", code == 0 ? "ok" : code == 2 ? "mismatch" : "nonconverged"},
          {"exit_code", code},
          {"quantities", q},
          {"comparisons", c},
          {"errors", errors},
          {"files", files},
          {"started_at", started_at},
          {"wall_time_s", wall_time}};
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::io, "cannot rename onto " + path.string());
  }
}

std::vector<std::filesystem::path> write_artifacts(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + dir.string());
  std::vector<std::filesystem::path> written;
  std::string plot = report.plot;
  for (const auto& t : report.tables) {
    const std::string file = file_stem(report, t) + ".csv";
    auto path = dir / file;
    write_atomic(path, t.csv());
    written.push_back(path);
    const std::string key = t.name.empty() ? "{csv}" : "{csv:" + t.name + "}";
    for (auto pos = plot.find(key); pos != std::string::npos; pos = plot.find(key)) {
      plot.replace(pos, key.size(), "'" + file + "'");
    }
  }
  auto gp = dir / (report.manifest.name + ".gp");
  write_atomic(gp, "set datafile separator ','\nset key autotitle columnhead\n" + plot);
  written.push_back(gp);
  auto rep = dir / (report.manifest.name + ".report.json");
  write_atomic(rep, report.to_json().dump(2) + "\n");
  written.push_back(rep);
  return written;
}

}  // namespace heislab::lab

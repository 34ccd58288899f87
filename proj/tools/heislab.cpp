#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heislab/error.hpp"
#include "heislab/lab/experiments.hpp"
#include "heislab/lab/fixtures.hpp"

#ifndef HEISLAB_FIXTURES_FILE
#define HEISLAB_FIXTURES_FILE "fixtures/fixtures.json"
#endif

namespace {

using namespace heislab;
using namespace heislab::lab;

struct RunArgs {
  std::string manifest;
  std::string out;
  std::string fixtures = HEISLAB_FIXTURES_FILE;
  std::uint64_t seed = 0;
  int workers = 0;
  bool quiet = false;
};

std::string brief(const nlohmann::json& j) {
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", j.get<double>());
    return buf;
  }
  std::string s = j.dump();
  return s.size() > 80 ? s.substr(0, 77) + "..." : s;
}

int run_command(const std::string& command, const RunArgs& a, CLI::App& sub) {
  auto m = ExperimentManifest::read(a.manifest);
  if (m.command != command) {
    throw Error(ErrorCode::schema_violation,
                "manifest command '" + m.command + "' does not match '" + command + "'");
  }
  if (sub.count("--seed")) m.seed = a.seed;
  if (sub.count("--workers")) {
    if (a.workers < 1) throw Error(ErrorCode::schema_violation, "--workers must be >= 1");
    m.workers = a.workers;
  }
  auto report = run_experiment(m, RunOptions{a.fixtures});
  auto dir = output_directory(m, a.out);
  auto files = write_artifacts(report, dir);
  if (!a.quiet) {
    for (const auto& c : report.comparisons) {
      std::printf("%-4s %s: expected %s, observed %s (%s; %s)\n", to_string(c.verdict), c.name.c_str(),
                  brief(c.expected).c_str(), brief(c.observed).c_str(), c.relation.c_str(), c.provenance.c_str());
    }
    for (const auto& e : report.errors) std::printf("ERROR %s\n", e.c_str());
    std::printf("wrote %s (%.2f s, exit %d)\n", (dir / (m.name + ".report.json")).string().c_str(),
                report.wall_time, report.exit_code());
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heislab: experiments on the Heisenberg group"};
  app.require_subcommand(1);

  RunArgs run;
  std::vector<std::pair<std::string, CLI::App*>> runs;
  for (const auto& name : lab::commands()) {
    auto* sub = app.add_subcommand(name, "run a '" + name + "' manifest");
    sub->add_option("--manifest", run.manifest, "experiment manifest (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", run.seed, "override the manifest seed");
    sub->add_option("--workers", run.workers, "override the worker count");
    sub->add_option("--out", run.out, "output directory");
    sub->add_option("--fixtures", run.fixtures, "fixture file");
    sub->add_flag("--quiet", run.quiet, "print nothing on success");
    runs.emplace_back(name, sub);
  }

  auto* fx = app.add_subcommand("fixtures", "verify or regenerate recorded reference values");
  fx->require_subcommand(1);
  std::vector<std::string> only;
  std::string file = HEISLAB_FIXTURES_FILE;
  int fx_workers = 1;
  bool oracle = false;
  auto* verify = fx->add_subcommand("verify", "re-run the fixture checks");
  auto* regen = fx->add_subcommand("regenerate", "recompute fixtures with their oracles");
  for (auto* s : {verify, regen}) {
    s->add_option("--only", only, "restrict to these fixtures");
    s->add_option("--file", file, "fixture file");
    s->add_option("--workers", fx_workers, "worker threads")->check(CLI::PositiveNumber);
  }
  regen->add_flag("--oracle", oracle, "required: run the full oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (auto& [name, sub] : runs) {
      if (sub->parsed()) return run_command(name, run, *sub);
    }
    if (verify->parsed()) {
      auto f = FixtureFile::read(file);
      auto checks = verify_fixtures(f, only, fx_workers);
      bool ok = true;
      for (const auto& c : checks) {
        std::printf("%-4s %s: stored %s, observed %s (%s)\n", c.ok ? "PASS" : "FAIL", c.name.c_str(),
                    brief(c.stored).c_str(), brief(c.observed).c_str(), c.relation.c_str());
        ok = ok && c.ok;
      }
      return ok ? 0 : 2;
    }
    if (regen->parsed()) {
      if (!oracle) {
        std::fprintf(stderr, "error: fixtures regenerate needs --oracle\n");
        return 1;
      }
      auto f = FixtureFile::read(file);
      regenerate_fixtures(f, only, fx_workers);
      f.write(file);
      std::printf("wrote %s (version %d)\n", file.c_str(), f.version());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::nonconverged ? 3 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

// Copyright 2026 The qsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qsync steady|tongue|smeasure|qsurface|evolve|spin1
//       [--config FILE] [--set key=value]... [--out PATH] [--format csv|json] [--jobs N]
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsync/sweep/runs.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

namespace fs = std::filesystem;
using namespace qsync::sweep;

const char* describe(Command c) {
  switch (c) {
    case Command::steady: return "driven two-level steady state, engine vs closed form";
    case Command::tongue: return "max_phi S(phi) over an (epsilon, delta) grid";
    case Command::smeasure: return "S(phi) curves, optionally for a family of delta or epsilon";
    case Command::qsurface: return "Husimi Q(theta, phi) of the steady state";
    case Command::evolve: return "RK4 trajectory of the Bloch vector";
    case Command::spin1: return "spin-1 steady state and check of the reference m3/m8 formulas";
  }
  return "";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Written next to the target and renamed into place, so a failed run never
// leaves a partial file behind.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const fs::path target(path);
  const fs::path tmp = fs::path(path + ".partial");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output '" + path + "'");
    out << text;
    if (!out.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw qsync::Error("failed writing '" + path + "'");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsync: synchronization of dissipative two- and three-level systems to an external drive"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string format_name = "csv";
  unsigned jobs = 0;

  for (const auto& [name, cmd] : kCommands) {
    auto* sub = app.add_subcommand(std::string(name), describe(cmd));
    sub->add_option("--config", config_path, "flat key = value config file (or a previous qsync output)");
    sub->add_option("--set", overrides, "override a config key: --set key=value")->allow_extra_args(false);
    sub->add_option("--out", out_path, "output path (default: standard output)");
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "worker threads (default: QSYNC_JOBS or hardware concurrency)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto* chosen = app.get_subcommands().front();
  const Command command = *parse_command(chosen->get_name());

  try {
    Entries entries;
    if (!config_path.empty()) entries = parse_entries(read_file(config_path));
    for (const auto& o : overrides) {
      auto [k, v] = split_assignment(o, "--set");
      entries[k] = v;
    }
    const RunConfig cfg = resolve_config(command, entries);
    const ResultTable table = run(cfg, resolve_jobs(jobs));
    write_output(out_path, render(table, format_name == "json" ? Format::json : Format::csv));
    std::cerr << "qsync " << to_string(command) << ": " << table.rows.size() << " rows in " << table.wall_seconds
              << " s\n";
  } catch (const ConfigError& e) {
    std::cerr << "qsync: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qsync: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

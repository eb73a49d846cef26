// Copyright 2026 The qreset Authors
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

// qreset <command> --config <path> [--out <path>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical invariant failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qreset/cli/commands.hpp"

namespace {

constexpr int kConfigErrorExit = 2;
constexpr int kInvariantErrorExit = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qreset::cli::ConfigError("cannot write output file '" + path + "'");
  out << text;
  if (!out) throw qreset::cli::ConfigError("failed writing output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum state evolution under stochastic resetting"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  for (const char* name : {"dist-profile", "evolve", "equilibrium", "mot", "bloch", "jc"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario file (key = value lines)")->required();
    sub->add_option("--out", out_path, "CSV output path (overrides output.path; default stdout)");
    sub->add_option("--seed", seed, "Monte-Carlo master seed (overrides mc.seed)");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigErrorExit;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto cmd = *qreset::cli::parse_command(name);
  try {
    const auto cfg = qreset::cli::load_scenario(config_path);
    const auto result = qreset::cli::run_scenario(cmd, cfg, {seed, threads});
    const std::string target = out_path.empty() ? cfg.output_path : out_path;
    auto summary = result.summary;
    summary["status"] = "ok";
    if (target.empty()) {
      std::cout << result.csv;
      std::cerr << summary.dump(2) << '\n';
    } else {
      write_file(target, result.csv);
      summary["output"] = target;
      std::cout << summary.dump(2) << '\n';
    }
    return 0;
  } catch (const qreset::cli::ConfigError& e) {
    std::cerr << qreset::cli::Json{{"status", "config-error"}, {"message", e.what()}}.dump(2) << '\n';
    return kConfigErrorExit;
  } catch (const qreset::InvariantError& e) {
    std::cerr << qreset::cli::Json{{"status", "invariant-failure"}, {"invariant", e.invariant()}, {"message", e.what()}}.dump(2)
              << '\n';
    return kInvariantErrorExit;
  } catch (const qreset::RunawayError& e) {
    std::cerr << qreset::cli::Json{{"status", "invariant-failure"}, {"invariant", "runaway"}, {"message", e.what()}}.dump(2)
              << '\n';
    return kInvariantErrorExit;
  }
}

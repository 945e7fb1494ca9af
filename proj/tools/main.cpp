/*
   Copyright 2026 The kinscat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// kinscat: run a scattering scenario from a configuration file.
//
//   kinscat run <config> [--out DIR] [--seed N] [--workers N] [--paths N]
//   kinscat check <config>
//
// Exit codes: 0 success, 1 invalid configuration or input, 2 I/O error,
// 3 numerical error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "kinscat/config.hpp"
#include "kinscat/errors.hpp"
#include "kinscat/scenario.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kIo = 2, kNumerical = 3 };

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kinscat::IoError(fmt::format("cannot read '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_problems(const kinscat::ConfigError &e) {
  for (const std::string &p : e.problems()) std::cerr << "error: " << p << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Kinetic Monte Carlo for scattering rates and the coherent backscattering peak"};
  app.set_version_flag("--version", std::string(kinscat::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> paths;

  CLI::App *run = app.add_subcommand("run", "Run every target of a scenario and write CSV tables");
  run->add_option("config", config_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (default: [output] directory, $KINSCAT_OUT_DIR, kinscat-out)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--paths", paths, "Number of paths")->check(CLI::PositiveNumber);

  CLI::App *check = app.add_subcommand("check", "Validate a scenario and print its canonical form");
  check->add_option("config", config_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    kinscat::ScenarioConfig config = kinscat::parse_config(read_text(config_path));
    if (*check) {
      for (const std::string &w : config.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << kinscat::to_text(config);
      return kOk;
    }
    if (seed) config.run.seed = *seed;
    if (workers) config.run.workers = *workers;
    if (paths) config.run.paths = *paths;
    const auto directory = kinscat::resolve_output_directory(config, out_dir);
    const kinscat::RunManifest m = kinscat::run_scenario(config, directory);
    for (const std::string &w : m.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << fmt::format("config {} seed {} paths {} workers {} ({:.2f} s)\n", m.config_hash,
                             m.seed, m.paths, m.workers, m.wall_clock_seconds);
    for (const std::string &f : m.outputs) std::cout << (directory / f).string() << '\n';
    return kOk;
  } catch (const kinscat::ConfigError &e) {
    print_problems(e);
    return kInvalid;
  } catch (const kinscat::InvalidInput &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const kinscat::IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const kinscat::NumericalError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kinscat/config.hpp"

namespace kinscat {

std::string_view version();

/// Everything needed to reproduce a run's tables.
struct RunManifest {
  std::string config_hash;  ///< FNV-1a 64 of the canonical config text, hex
  std::string config_text;  ///< canonical config, after command-line overrides
  std::uint64_t seed{0};
  std::uint64_t paths{0};
  unsigned workers{1};
  std::uint64_t batch_size{0};
  std::uint64_t batch_count{0};
  std::string version;
  double wall_clock_seconds{0.0};
  std::uint64_t truncated_paths{0};
  double truncated_fraction{0.0};
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;  ///< file names relative to the output directory
};

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Output directory precedence: explicit override, [output] directory,
/// $KINSCAT_OUT_DIR, then "kinscat-out".
std::filesystem::path resolve_output_directory(const ScenarioConfig &config,
                                               const std::string &override_dir = {});

/// Runs every target of the scenario from one shared set of paths and writes
/// `<target>.csv` (plus `<target>.json` when requested) and `manifest.json`.
///
/// Throws ConfigError / InvalidInput for inconsistent inputs, NumericalError when
/// a quadrature misses its tolerance, IoError when the directory is unwritable.
RunManifest run_scenario(const ScenarioConfig &config, const std::filesystem::path &directory);

/// CSV headers, one per target type; the column order is stable.
std::string_view csv_header(TargetType type);

}  // namespace kinscat

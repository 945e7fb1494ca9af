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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinscat/medium.hpp"
#include "kinscat/transport.hpp"

namespace kinscat {

enum class GeometryKind { ball, box, slab };
enum class CovarianceKind { gaussian, exponential, constant };

struct MediumConfig {
  GeometryKind geometry{GeometryKind::ball};
  Vec3 center;                    ///< ball
  double radius{1.0};             ///< ball
  Vec3 corner;                    ///< box
  Vec3 extents{1.0, 1.0, 1.0};    ///< box
  double thickness{1.0};          ///< slab
  double half_width{1.0};         ///< slab
  double density{1.0};
  CovarianceKind covariance{CovarianceKind::gaussian};
  /// Exactly one of amplitude / rate is set. `rate` calibrates the amplitude so
  /// that the total rate at the source momentum equals it.
  std::optional<double> amplitude;
  std::optional<double> rate;
  double scale{1.0};              ///< unused for the constant covariance
  DispersionKind dispersion{DispersionKind::quadratic};
  Model model{Model::schroedinger};

  friend bool operator==(const MediumConfig &, const MediumConfig &) = default;
};

struct SourceConfig {
  Vec3 k{0.0, 0.0, 1.0};
  double plane_gap{1.0};
  double window_margin{2.0};  ///< in mean free paths

  friend bool operator==(const SourceConfig &, const SourceConfig &) = default;
};

struct RunConfig {
  std::uint64_t paths{1};
  std::uint64_t seed{1};
  unsigned workers{1};
  std::uint64_t batch_size{10000};
  std::uint32_t collision_cap{kDefaultCollisionCap};
  double truncation_warning{1e-6};

  RunOptions options() const { return {paths, seed, workers, batch_size, collision_cap}; }

  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

enum class TargetType { sigma_histogram, sigma_nee, peak, diffusion_compare, factor_two };

struct TargetConfig {
  std::string name;
  TargetType type{TargetType::factor_two};
  // sigma_histogram
  int bands{8};
  int sectors{16};
  std::optional<Vec3> polar_axis;  ///< defaults to the source direction
  // sigma_nee
  std::vector<Vec3> k_out;
  bool quadrature{false};
  // peak: explicit transverse vectors and/or multiples of 1/l* along kappa_1
  std::vector<Vec3> kappa;
  std::vector<double> lstar_kappa;

  friend bool operator==(const TargetConfig &, const TargetConfig &) = default;
};

struct OutputConfig {
  /// Empty means: KINSCAT_OUT_DIR, or "kinscat-out".
  std::string directory;
  bool json{false};

  friend bool operator==(const OutputConfig &, const OutputConfig &) = default;
};

struct ScenarioConfig {
  MediumConfig medium;
  SourceConfig source;
  RunConfig run;
  std::vector<TargetConfig> targets;
  OutputConfig output;
  /// Non-fatal notes from parsing, e.g. auto-projected kappa entries.
  std::vector<std::string> warnings;

  friend bool operator==(const ScenarioConfig &, const ScenarioConfig &) = default;
};

/// Parses the sectioned key = value format. Throws ConfigError listing every
/// problem found (unknown and duplicate keys with line numbers, missing keys,
/// invalid values, non-transverse kappa entries).
ScenarioConfig parse_config(std::string_view text);

/// Canonical text: fixed section and key order, 17 significant digits.
/// parse_config(to_text(c)) reproduces c.
std::string to_text(const ScenarioConfig &config);

/// Medium described by the config; resolves `rate` into an amplitude.
Medium build_medium(const ScenarioConfig &config);

std::string_view to_string(GeometryKind g);
std::string_view to_string(CovarianceKind c);
std::string_view to_string(TargetType t);

}  // namespace kinscat

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

#include "kinscat/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kinscat/diffusion.hpp"
#include "kinscat/errors.hpp"
#include "kinscat/estimators.hpp"

namespace kinscat {

namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

constexpr std::string_view kRngDescription =
    "philox4x32-10; key = splitmix64(splitmix64(seed) ^ batch_index) as (lo, hi) 32-bit words; "
    "counter = (block_lo, block_hi, 0, 0); uniform = (u64 >> 11) * 2^-53";

// One output table: header plus rows of already formatted cells.
struct Table {
  std::string_view header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out(header);
    out += '\n';
    for (const auto &row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
      }
      out += '\n';
    }
    return out;
  }

  json to_json() const {
    std::vector<std::string> columns;
    std::size_t start = 0;
    while (true) {
      const auto pos = header.find(',', start);
      columns.emplace_back(header.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    json rows_json = json::array();
    for (const auto &row : rows) {
      json r = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        // Cells are numeric text; keep them as strings when not finite.
        const double v = std::strtod(row[i].c_str(), nullptr);
        r[columns[i]] = std::isfinite(v) ? json(v) : json(row[i]);
      }
      rows_json.push_back(std::move(r));
    }
    return {{"columns", columns}, {"rows", rows_json}};
  }
};

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

// Per-target bookkeeping: which scorer in the composite holds its tallies.
struct Plan {
  const TargetConfig *target;
  std::size_t scorer{0};
  std::vector<Vec3> kappas;  ///< peak: resolved grid
};

Table peak_table(const PeakProfile &p, const Frame &frame, double lstar) {
  Table t{csv_header(TargetType::peak), {}};
  const double b = p.incoherent.value;
  for (const PeakPoint &pt : p.points) {
    const double lk = lstar * norm(pt.kappa);
    const double ratio = b > 0.0 ? pt.coherent.real() / b : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({num(dot(pt.kappa, frame.u)), num(dot(pt.kappa, frame.v)),
                      num(pt.coherent.real()), num(pt.coherent.imag()), num(pt.coherent_error),
                      num(p.incoherent.value), num(p.incoherent.error), num(p.single.value),
                      num(pt.enhancement), num(pt.coherent_im_error), num(p.single.error),
                      num(lk), num(ratio), num(cone_shape(lk))});
  }
  return t;
}

}  // namespace

std::string_view version() {
#ifdef KINSCAT_VERSION
  return KINSCAT_VERSION;
#else
  return "unknown";
#endif
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", h);
}

std::filesystem::path resolve_output_directory(const ScenarioConfig &config,
                                               const std::string &override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!config.output.directory.empty()) return config.output.directory;
  if (const char *env = std::getenv("KINSCAT_OUT_DIR"); env && *env) return env;
  return "kinscat-out";
}

std::string_view csv_header(TargetType type) {
  switch (type) {
    case TargetType::sigma_histogram:
      return "band,sector,mu_lo,mu_hi,phi_lo,phi_hi,direction_x,direction_y,direction_z,"
             "solid_angle,sigma,sigma_stderr,rel_stderr,count";
    case TargetType::sigma_nee:
      return "k_out_x,k_out_y,k_out_z,sigma,sigma_stderr,single_scatter,single_scatter_stderr,"
             "multiple,multiple_stderr,single_scatter_quadrature,single_scatter_quadrature_error";
    case TargetType::peak:
      return "kappa_1,kappa_2,coherent_re,coherent_im,coherent_stderr,incoherent,"
             "incoherent_stderr,single_scatter,enhancement,coherent_im_stderr,"
             "single_scatter_stderr,lstar_kappa,coherent_ratio,diffusive_ratio";
    case TargetType::diffusion_compare:
      return "lstar_kappa,closed_form_bracket,quadrature_bracket,rel_diff";
    case TargetType::factor_two:
      return "incoherent,incoherent_stderr,coherent_at_zero,back_total,twice_incoherent,"
             "enhancement_at_zero,single_scatter,single_scatter_stderr";
  }
  return {};
}

RunManifest run_scenario(const ScenarioConfig &config, const std::filesystem::path &directory) {
  const auto started = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_text = to_text(config);
  manifest.config_hash = fnv1a_hex(manifest.config_text);
  manifest.seed = config.run.seed;
  manifest.paths = config.run.paths;
  manifest.workers = config.run.workers;
  manifest.batch_size = config.run.batch_size;
  manifest.version = std::string(version());
  manifest.warnings = config.warnings;

  const Medium medium = build_medium(config);
  const Experiment experiment = Experiment::create(medium, config.source.k,
                                                   config.source.window_margin,
                                                   config.source.plane_gap);
  const RunOptions options = config.run.options();
  check_run_options(options);
  manifest.batch_count = options.batch_count();
  const Frame frame = experiment.source.frame;
  const double lstar = experiment.kernel.mean_free_path();

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw IoError(fmt::format("cannot create output directory '{}'", directory.string()));
  }

  CompositeScorer composite;
  std::vector<Plan> plans;
  bool needs_paths = false;
  for (const TargetConfig &t : config.targets) {
    Plan plan{&t, 0, {}};
    switch (t.type) {
      case TargetType::sigma_histogram: {
        const Vec3 axis = t.polar_axis ? *t.polar_axis : experiment.source.direction;
        plan.scorer = composite.analog.size();
        composite.analog.emplace_back(AngularBins(axis, t.bands, t.sectors));
        needs_paths = true;
        break;
      }
      case TargetType::sigma_nee: {
        std::vector<NeeTarget> targets;
        for (const Vec3 &k_out : t.k_out) targets.push_back(NeeTarget::point(k_out));
        plan.scorer = composite.nee.size();
        composite.nee.emplace_back(experiment, std::move(targets));
        needs_paths = true;
        break;
      }
      case TargetType::peak:
        plan.kappas = t.kappa;
        if (!t.lstar_kappa.empty() && !std::isfinite(lstar)) {
          throw InvalidInput(fmt::format("[target {}] lstar_kappa needs a finite mean free path", t.name));
        }
        for (double lk : t.lstar_kappa) plan.kappas.push_back((lk / lstar) * frame.u);
        plan.scorer = composite.peak.size();
        composite.peak.emplace_back(experiment, plan.kappas);
        needs_paths = true;
        break;
      case TargetType::factor_two:
        plan.scorer = composite.peak.size();
        composite.peak.emplace_back(experiment, std::vector<Vec3>{Vec3{}});
        needs_paths = true;
        break;
      case TargetType::diffusion_compare:
        break;
    }
    plans.push_back(std::move(plan));
  }

  RunStats stats;
  if (needs_paths) {
    composite = run_batches(experiment.source, experiment.kernel, medium.shape(), options,
                            composite, &stats);
  }
  manifest.truncated_paths = stats.truncated;
  manifest.truncated_fraction = stats.truncated_fraction();
  if (manifest.truncated_fraction > config.run.truncation_warning) {
    manifest.warnings.push_back(fmt::format(
        "{} of {} paths hit the collision cap {} (fraction {:.3g} above {:.3g})", stats.truncated,
        stats.paths, options.collision_cap, manifest.truncated_fraction,
        config.run.truncation_warning));
  }

  json targets_json = json::array();
  for (const Plan &plan : plans) {
    const TargetConfig &t = *plan.target;
    Table table{csv_header(t.type), {}};
    switch (t.type) {
      case TargetType::sigma_histogram: {
        const AngularHistogram h = composite.analog[plan.scorer].result(experiment, stats);
        for (std::size_t i = 0; i < h.bins.size(); ++i) {
          const AngularBins::Bin b = h.bins.bin(i);
          const Vec3 d = h.bins.center(i);
          table.rows.push_back({std::to_string(b.band), std::to_string(b.sector), num(b.mu_lo),
                                num(b.mu_hi), num(b.phi_lo), num(b.phi_hi), num(d.x), num(d.y),
                                num(d.z), num(h.bins.solid_angle(i)), num(h.sigma[i].value),
                                num(h.sigma[i].error), num(h.sigma[i].relative_error()),
                                std::to_string(h.counts[i])});
        }
        break;
      }
      case TargetType::sigma_nee: {
        const auto results = composite.nee[plan.scorer].result(experiment);
        for (const NeeResult &r : results) {
          const Vec3 &ko = r.target.momenta.front();
          double quad = std::numeric_limits<double>::quiet_NaN();
          double quad_err = std::numeric_limits<double>::quiet_NaN();
          if (t.quadrature) {
            const QuadratureValue q = single_scattering_quadrature(medium, config.source.k, ko);
            quad = q.value;
            quad_err = q.error;
          }
          table.rows.push_back({num(ko.x), num(ko.y), num(ko.z), num(r.total.value),
                                num(r.total.error), num(r.single.value), num(r.single.error),
                                num(r.multiple.value), num(r.multiple.error), num(quad),
                                num(quad_err)});
        }
        break;
      }
      case TargetType::peak:
        table = peak_table(composite.peak[plan.scorer].result(experiment, stats), frame, lstar);
        break;
      case TargetType::factor_two: {
        const PeakProfile profile = composite.peak[plan.scorer].result(experiment, stats);
        const FactorTwoResult r = factor_two_from(profile);
        table.rows.push_back({num(r.incoherent), num(profile.incoherent.error),
                              num(r.coherent_at_zero), num(r.back_total),
                              num(r.twice_incoherent), num(r.enhancement), num(r.single.value),
                              num(r.single.error)});
        break;
      }
      case TargetType::diffusion_compare: {
        const DiffusionParams params = diffusion_params(medium, config.source.k);
        const double unit = params.total_rate * params.total_rate / params.diffusion *
                            params.mean_free_path;
        for (double lk : t.lstar_kappa) {
          const double kappa = lk / params.mean_free_path;
          const double closed = cone_closed_form(params, kappa) / unit;
          const double quad = cone_quadrature(params, kappa).value / unit;
          table.rows.push_back(
              {num(lk), num(closed), num(quad), num(std::abs(quad - closed) / closed)});
        }
        break;
      }
    }
    const std::string csv_name = t.name + ".csv";
    write_file(directory / csv_name, table.csv());
    manifest.outputs.push_back(csv_name);
    if (config.output.json) {
      const std::string json_name = t.name + ".json";
      json doc = table.to_json();
      doc["target"] = t.name;
      doc["type"] = std::string(to_string(t.type));
      write_file(directory / json_name, doc.dump(2) + "\n");
      manifest.outputs.push_back(json_name);
    }
    targets_json.push_back({{"name", t.name}, {"type", std::string(to_string(t.type))}});
  }

  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const SourceSpec &src = experiment.source;
  json doc = {
      {"version", manifest.version},
      {"config_hash", manifest.config_hash},
      {"config", manifest.config_text},
      {"seed", manifest.seed},
      {"paths", manifest.paths},
      {"workers", manifest.workers},
      {"batch_size", manifest.batch_size},
      {"batch_count", manifest.batch_count},
      {"rng", kRngDescription},
      {"wall_clock_seconds", manifest.wall_clock_seconds},
      {"paths_escaped", stats.escaped},
      {"paths_truncated", manifest.truncated_paths},
      {"truncated_fraction", manifest.truncated_fraction},
      {"collisions", stats.collisions},
      {"max_collisions", stats.max_collisions},
      {"derived",
       {{"amplitude", medium.covariance().amplitude()},
        {"energy", experiment.energy()},
        {"total_rate", experiment.kernel.total_rate()},
        {"transport_rate", experiment.kernel.transport_rate()},
        {"mean_free_path", lstar},
        {"source_plane_point", {src.plane_point.x, src.plane_point.y, src.plane_point.z}},
        {"source_window_radius", src.window_radius},
        {"source_weight", src.weight()},
        {"kappa_1_axis", {frame.u.x, frame.u.y, frame.u.z}},
        {"kappa_2_axis", {frame.v.x, frame.v.y, frame.v.z}}}},
      {"targets", targets_json},
      {"outputs", manifest.outputs},
      {"warnings", manifest.warnings},
  };
  write_file(directory / "manifest.json", doc.dump(2) + "\n");
  manifest.outputs.push_back("manifest.json");
  return manifest;
}

}  // namespace kinscat

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

#include "kinscat/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "kinscat/errors.hpp"
#include "kinscat/kernel.hpp"

namespace kinscat {

namespace {

constexpr double kProjectionTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

// Drops a trailing comment introduced by '#' outside double quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

std::string fmt_vec(const Vec3 &v) {
  return fmt_double(v.x) + ", " + fmt_double(v.y) + ", " + fmt_double(v.z);
}

struct Entry {
  std::string value;
  int line{0};
  bool used{false};
};

struct Section {
  std::string header;  ///< as written, for messages
  std::string target;  ///< target name for [target NAME]
  int line{0};
  std::map<std::string, Entry, std::less<>> keys;
};

// Typed access to one section; records problems instead of throwing.
class Reader {
 public:
  Reader(Section &section, std::vector<std::string> &problems)
      : s_(section), problems_(problems) {}

  bool has(std::string_view key) const { return s_.keys.find(key) != s_.keys.end(); }

  const Entry *raw(std::string_view key) {
    const auto it = s_.keys.find(key);
    if (it == s_.keys.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void problem(const Entry *e, std::string_view key, std::string_view what) {
    if (e) {
      problems_.push_back(fmt::format("line {}: [{}] {}: {}", e->line, s_.header, key, what));
    } else {
      problems_.push_back(fmt::format("[{}] {}: {}", s_.header, key, what));
    }
  }

  void missing(std::string_view key) { problem(nullptr, key, "required key is missing"); }

  std::optional<double> number(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    auto v = parse_number(e->value);
    if (!v) problem(e, key, fmt::format("'{}' is not a number", e->value));
    return v;
  }

  template <class Int>
  std::optional<Int> integer(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    Int v{};
    const std::string &t = e->value;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      problem(e, key, fmt::format("'{}' is not a valid integer", t));
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    problem(e, key, fmt::format("'{}' is not true or false", e->value));
    return std::nullopt;
  }

  std::optional<std::string> word(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<Vec3> vector(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    auto v = parse_vector(e->value);
    if (!v) problem(e, key, fmt::format("'{}' is not a finite 3-vector", e->value));
    return v;
  }

  std::optional<std::vector<Vec3>> vectors(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    std::vector<Vec3> out;
    int index = 0;
    for (std::string_view item : split(e->value, ';')) {
      ++index;
      auto v = parse_vector(item);
      if (!v) {
        problem(e, key, fmt::format("entry {} '{}' is not a finite 3-vector", index, item));
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<double>> numbers(std::string_view key) {
    const Entry *e = raw(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    int index = 0;
    for (std::string_view item : split(e->value, ',')) {
      ++index;
      auto v = parse_number(item);
      if (!v || !std::isfinite(*v)) {
        problem(e, key, fmt::format("entry {} '{}' is not a finite number", index, item));
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  void report_unused() {
    for (const auto &[key, e] : s_.keys) {
      if (!e.used) problems_.push_back(fmt::format("line {}: unknown key '{}' in [{}]", e.line, key, s_.header));
    }
  }

  const Entry *entry(std::string_view key) const {
    const auto it = s_.keys.find(key);
    return it == s_.keys.end() ? nullptr : &it->second;
  }

 private:
  static std::optional<double> parse_number(std::string_view t) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
  }

  static std::optional<Vec3> parse_vector(std::string_view t) {
    std::vector<double> parts;
    std::string buf(t);
    for (char &c : buf) {
      if (c == ',') c = ' ';
    }
    std::string_view rest = buf;
    while (true) {
      rest = trim(rest);
      if (rest.empty()) break;
      const auto end = rest.find_first_of(" \t");
      auto v = parse_number(rest.substr(0, end));
      if (!v || !std::isfinite(*v)) return std::nullopt;
      parts.push_back(*v);
      if (end == std::string_view::npos) break;
      rest = rest.substr(end);
    }
    if (parts.size() != 3) return std::nullopt;
    return Vec3{parts[0], parts[1], parts[2]};
  }

  Section &s_;
  std::vector<std::string> &problems_;
};

template <class Enum, std::size_t N>
std::optional<Enum> lookup(Reader &r, std::string_view key,
                           const std::pair<std::string_view, Enum> (&table)[N]) {
  const auto w = r.word(key);
  if (!w) return std::nullopt;
  std::string options;
  for (const auto &[name, value] : table) {
    if (*w == name) return value;
    options += options.empty() ? "" : ", ";
    options += name;
  }
  r.problem(r.entry(key), key, fmt::format("'{}' is not one of: {}", *w, options));
  return std::nullopt;
}

constexpr std::pair<std::string_view, GeometryKind> kGeometries[] = {
    {"ball", GeometryKind::ball}, {"box", GeometryKind::box}, {"slab", GeometryKind::slab}};
constexpr std::pair<std::string_view, CovarianceKind> kCovariances[] = {
    {"gaussian", CovarianceKind::gaussian},
    {"exponential", CovarianceKind::exponential},
    {"constant", CovarianceKind::constant}};
constexpr std::pair<std::string_view, DispersionKind> kDispersions[] = {
    {"quadratic", DispersionKind::quadratic}, {"linear", DispersionKind::linear}};
constexpr std::pair<std::string_view, Model> kModels[] = {{"schroedinger", Model::schroedinger},
                                                          {"wave", Model::wave}};
constexpr std::pair<std::string_view, TargetType> kTargetTypes[] = {
    {"sigma_histogram", TargetType::sigma_histogram},
    {"sigma_nee", TargetType::sigma_nee},
    {"peak", TargetType::peak},
    {"diffusion_compare", TargetType::diffusion_compare},
    {"factor_two", TargetType::factor_two}};

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

void read_medium(Reader &r, MediumConfig &m) {
  if (auto g = lookup(r, "geometry", kGeometries)) {
    m.geometry = *g;
  } else if (!r.has("geometry")) {
    r.missing("geometry");
  }
  switch (m.geometry) {
    case GeometryKind::ball:
      if (auto v = r.vector("center")) m.center = *v;
      if (auto v = r.number("radius")) {
        m.radius = *v;
        if (!positive(*v)) r.problem(r.entry("radius"), "radius", "must be positive and finite");
      }
      break;
    case GeometryKind::box:
      if (auto v = r.vector("corner")) m.corner = *v;
      if (auto v = r.vector("extents")) {
        m.extents = *v;
        if (!(positive(v->x) && positive(v->y) && positive(v->z))) {
          r.problem(r.entry("extents"), "extents", "components must be positive");
        }
      }
      break;
    case GeometryKind::slab:
      if (auto v = r.number("thickness")) {
        m.thickness = *v;
        if (!positive(*v)) r.problem(r.entry("thickness"), "thickness", "must be positive and finite");
      }
      if (auto v = r.number("half_width")) {
        m.half_width = *v;
        if (!positive(*v)) r.problem(r.entry("half_width"), "half_width", "must be positive and finite");
      }
      break;
  }
  if (auto v = r.number("density")) {
    m.density = *v;
    if (!(*v >= 0.0) || !std::isfinite(*v)) r.problem(r.entry("density"), "density", "must be finite and nonnegative");
  }
  if (auto c = lookup(r, "covariance", kCovariances)) {
    m.covariance = *c;
  } else if (!r.has("covariance")) {
    r.missing("covariance");
  }
  m.amplitude = r.number("amplitude");
  m.rate = r.number("rate");
  if (m.amplitude && m.rate) {
    r.problem(r.entry("rate"), "rate", "give either amplitude or rate, not both");
  } else if (!r.has("amplitude") && !r.has("rate")) {
    r.missing("amplitude (or rate)");
  }
  if (m.amplitude && (!(*m.amplitude >= 0.0) || !std::isfinite(*m.amplitude))) {
    r.problem(r.entry("amplitude"), "amplitude", "must be finite and nonnegative");
  }
  if (m.rate && (!(*m.rate >= 0.0) || !std::isfinite(*m.rate))) {
    r.problem(r.entry("rate"), "rate", "must be finite and nonnegative");
  }
  if (m.covariance != CovarianceKind::constant) {
    if (auto v = r.number("scale")) {
      m.scale = *v;
      if (!positive(*v)) r.problem(r.entry("scale"), "scale", "must be positive and finite");
    } else if (!r.has("scale")) {
      r.missing("scale");
    }
  }
  if (auto d = lookup(r, "dispersion", kDispersions)) m.dispersion = *d;
  if (auto mo = lookup(r, "model", kModels)) m.model = *mo;
  if (m.model == Model::wave && m.dispersion != DispersionKind::linear) {
    r.problem(r.entry("model"), "model", "wave requires dispersion = linear");
  }
}

void read_source(Reader &r, SourceConfig &s) {
  if (auto v = r.vector("k")) {
    s.k = *v;
    if (!(norm2(*v) > 0.0)) r.problem(r.entry("k"), "k", "must be nonzero");
  } else if (!r.has("k")) {
    r.missing("k");
  }
  if (auto v = r.number("plane_gap")) {
    s.plane_gap = *v;
    if (!positive(*v)) r.problem(r.entry("plane_gap"), "plane_gap", "must be positive and finite");
  }
  if (auto v = r.number("window_margin")) {
    s.window_margin = *v;
    if (!(*v >= 0.0) || !std::isfinite(*v)) {
      r.problem(r.entry("window_margin"), "window_margin", "must be finite and nonnegative");
    }
  }
}

void read_run(Reader &r, RunConfig &run) {
  if (auto v = r.integer<std::uint64_t>("paths")) {
    run.paths = *v;
    if (*v < 1) r.problem(r.entry("paths"), "paths", "must be at least 1");
  } else if (!r.has("paths")) {
    r.missing("paths");
  }
  if (auto v = r.integer<std::uint64_t>("seed")) run.seed = *v;
  if (auto v = r.integer<unsigned>("workers")) {
    run.workers = *v;
    if (*v < 1) r.problem(r.entry("workers"), "workers", "must be at least 1");
  }
  if (auto v = r.integer<std::uint64_t>("batch_size")) {
    run.batch_size = *v;
    if (*v < 1) r.problem(r.entry("batch_size"), "batch_size", "must be at least 1");
  }
  if (auto v = r.integer<std::uint32_t>("collision_cap")) {
    run.collision_cap = *v;
    if (*v < 1) r.problem(r.entry("collision_cap"), "collision_cap", "must be at least 1");
  }
  if (auto v = r.number("truncation_warning")) {
    run.truncation_warning = *v;
    if (!(*v >= 0.0 && *v <= 1.0)) {
      r.problem(r.entry("truncation_warning"), "truncation_warning", "must lie in [0, 1]");
    }
  }
}

void read_target(Reader &r, TargetConfig &t) {
  if (auto ty = lookup(r, "type", kTargetTypes)) {
    t.type = *ty;
  } else {
    if (!r.has("type")) r.missing("type");
    // Consume every key so the type error is the only complaint.
    for (std::string_view k : {"bands", "sectors", "polar_axis", "k_out", "quadrature", "kappa",
                               "lstar_kappa"}) {
      r.raw(k);
    }
    return;
  }
  switch (t.type) {
    case TargetType::sigma_histogram:
      if (auto v = r.integer<int>("bands")) {
        t.bands = *v;
        if (*v < 1) r.problem(r.entry("bands"), "bands", "must be at least 1");
      }
      if (auto v = r.integer<int>("sectors")) {
        t.sectors = *v;
        if (*v < 1) r.problem(r.entry("sectors"), "sectors", "must be at least 1");
      }
      if (auto v = r.vector("polar_axis")) {
        t.polar_axis = *v;
        if (!(norm2(*v) > 0.0)) r.problem(r.entry("polar_axis"), "polar_axis", "must be nonzero");
      }
      break;
    case TargetType::sigma_nee:
      if (auto v = r.vectors("k_out")) {
        t.k_out = *v;
      } else if (!r.has("k_out")) {
        r.missing("k_out");
      }
      if (auto v = r.boolean("quadrature")) t.quadrature = *v;
      break;
    case TargetType::peak:
      if (auto v = r.vectors("kappa")) t.kappa = *v;
      if (auto v = r.numbers("lstar_kappa")) t.lstar_kappa = *v;
      if (!r.has("kappa") && !r.has("lstar_kappa")) r.missing("kappa (or lstar_kappa)");
      break;
    case TargetType::diffusion_compare:
      if (auto v = r.numbers("lstar_kappa")) {
        t.lstar_kappa = *v;
      } else if (!r.has("lstar_kappa")) {
        for (int i = 0; i <= 20; ++i) t.lstar_kappa.push_back(0.5 * i);
      }
      break;
    case TargetType::factor_two:
      break;
  }
}

void read_output(Reader &r, OutputConfig &o) {
  if (auto v = r.word("directory")) o.directory = *v;
  if (auto v = r.word("formats")) {
    o.json = false;
    bool csv = false;
    for (std::string_view f : split(*v, ',')) {
      if (f == "csv") {
        csv = true;
      } else if (f == "json") {
        o.json = true;
      } else {
        r.problem(r.entry("formats"), "formats", fmt::format("unknown format '{}'", f));
      }
    }
    if (!csv) r.problem(r.entry("formats"), "formats", "csv output is always written and must be listed");
  }
}

// Cross-section checks that need the source direction.
void check_targets(ScenarioConfig &c, std::vector<std::string> &problems) {
  if (!(norm2(c.source.k) > 0.0) || !is_finite(c.source.k)) return;
  const Vec3 khat = normalized(c.source.k);
  const double radius = norm(c.source.k);
  for (TargetConfig &t : c.targets) {
    for (std::size_t i = 0; i < t.k_out.size(); ++i) {
      const Vec3 &ko = t.k_out[i];
      if (std::abs(norm(ko) - radius) > 1e-9 * radius) {
        problems.push_back(fmt::format(
            "[target {}] k_out entry {} ({}) is not on the energy shell |k'| = {}", t.name, i + 1,
            fmt_vec(ko), fmt_double(radius)));
      } else if (dot(normalized(ko), khat) >= 1.0 - 1e-14) {
        problems.push_back(fmt::format(
            "[target {}] k_out entry {} is the forward direction k' = k", t.name, i + 1));
      }
    }
    for (std::size_t i = 0; i < t.kappa.size(); ++i) {
      Vec3 &kappa = t.kappa[i];
      const double along = dot(kappa, khat);
      if (along == 0.0) continue;
      if (std::abs(along) < kProjectionTolerance) {
        kappa -= along * khat;
        c.warnings.push_back(fmt::format(
            "[target {}] kappa entry {} projected onto the plane transverse to k (removed {:.3g})",
            t.name, i + 1, along));
      } else {
        problems.push_back(fmt::format(
            "[target {}] kappa entry {} ({}) is not transverse to k (component {} along k)",
            t.name, i + 1, fmt_vec(kappa), fmt_double(along)));
      }
    }
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  std::vector<std::string> problems;
  std::vector<Section> sections;
  std::set<std::string> seen_singletons;
  std::map<std::string, int> seen_targets;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(fmt::format("line {}: malformed section header '{}'", line_no, line));
        continue;
      }
      const std::string_view inner = trim(line.substr(1, line.size() - 2));
      Section s;
      s.line = line_no;
      s.header = std::string(inner);
      if (inner.substr(0, 7) == "target " || inner.substr(0, 7) == "target\t") {
        s.target = std::string(trim(inner.substr(7)));
        s.header = "target " + s.target;
        if (const auto it = seen_targets.find(s.target); it != seen_targets.end()) {
          problems.push_back(fmt::format("line {}: duplicate target '{}' (first defined on line {})",
                                         line_no, s.target, it->second));
        } else {
          seen_targets.emplace(s.target, line_no);
        }
      } else if (inner == "target") {
        problems.push_back(fmt::format("line {}: target section needs a name: [target NAME]", line_no));
        s.target = "";
      } else if (inner == "medium" || inner == "source" || inner == "run" || inner == "output") {
        if (!seen_singletons.insert(s.header).second) {
          problems.push_back(fmt::format("line {}: duplicate section [{}]", line_no, inner));
        }
      } else {
        problems.push_back(fmt::format("line {}: unknown section [{}]", line_no, inner));
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
      continue;
    }
    if (sections.empty()) {
      problems.push_back(fmt::format("line {}: key outside of any section", line_no));
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(unquote(trim(line.substr(eq + 1))));
    if (key.empty()) {
      problems.push_back(fmt::format("line {}: empty key", line_no));
      continue;
    }
    Section &s = sections.back();
    const auto [it, inserted] = s.keys.try_emplace(key, Entry{value, line_no, false});
    if (!inserted) {
      problems.push_back(fmt::format("line {}: duplicate key '{}' in [{}] (first set on line {})",
                                     line_no, key, s.header, it->second.line));
    }
  }

  ScenarioConfig c;
  bool have_medium = false, have_source = false, have_run = false;
  for (Section &s : sections) {
    Reader r(s, problems);
    if (!s.target.empty() || s.header.rfind("target", 0) == 0) {
      if (s.target.empty()) continue;
      TargetConfig t;
      t.name = s.target;
      read_target(r, t);
      c.targets.push_back(std::move(t));
    } else if (s.header == "medium") {
      have_medium = true;
      read_medium(r, c.medium);
    } else if (s.header == "source") {
      have_source = true;
      read_source(r, c.source);
    } else if (s.header == "run") {
      have_run = true;
      read_run(r, c.run);
    } else if (s.header == "output") {
      read_output(r, c.output);
    } else {
      continue;  // unknown section, already reported
    }
    r.report_unused();
  }
  if (!have_medium) problems.emplace_back("missing section [medium]");
  if (!have_source) problems.emplace_back("missing section [source]");
  if (!have_run) problems.emplace_back("missing section [run]");
  if (c.targets.empty() && seen_targets.empty()) {
    problems.emplace_back("no [target NAME] sections: nothing to compute");
  }
  check_targets(c, problems);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

std::string to_text(const ScenarioConfig &c) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string &value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  const MediumConfig &m = c.medium;
  out += "[medium]\n";
  put("geometry", std::string(to_string(m.geometry)));
  switch (m.geometry) {
    case GeometryKind::ball:
      put("center", fmt_vec(m.center));
      put("radius", fmt_double(m.radius));
      break;
    case GeometryKind::box:
      put("corner", fmt_vec(m.corner));
      put("extents", fmt_vec(m.extents));
      break;
    case GeometryKind::slab:
      put("thickness", fmt_double(m.thickness));
      put("half_width", fmt_double(m.half_width));
      break;
  }
  put("density", fmt_double(m.density));
  put("covariance", std::string(to_string(m.covariance)));
  if (m.amplitude) put("amplitude", fmt_double(*m.amplitude));
  if (m.rate) put("rate", fmt_double(*m.rate));
  if (m.covariance != CovarianceKind::constant) put("scale", fmt_double(m.scale));
  put("dispersion", std::string(to_string(m.dispersion)));
  put("model", std::string(to_string(m.model)));

  out += "\n[source]\n";
  put("k", fmt_vec(c.source.k));
  put("plane_gap", fmt_double(c.source.plane_gap));
  put("window_margin", fmt_double(c.source.window_margin));

  out += "\n[run]\n";
  put("paths", std::to_string(c.run.paths));
  put("seed", std::to_string(c.run.seed));
  put("workers", std::to_string(c.run.workers));
  put("batch_size", std::to_string(c.run.batch_size));
  put("collision_cap", std::to_string(c.run.collision_cap));
  put("truncation_warning", fmt_double(c.run.truncation_warning));

  for (const TargetConfig &t : c.targets) {
    out += fmt::format("\n[target {}]\n", t.name);
    put("type", std::string(to_string(t.type)));
    switch (t.type) {
      case TargetType::sigma_histogram:
        put("bands", std::to_string(t.bands));
        put("sectors", std::to_string(t.sectors));
        if (t.polar_axis) put("polar_axis", fmt_vec(*t.polar_axis));
        break;
      case TargetType::sigma_nee: {
        std::string list;
        for (const Vec3 &v : t.k_out) list += (list.empty() ? "" : "; ") + fmt_vec(v);
        put("k_out", list);
        put("quadrature", t.quadrature ? "true" : "false");
        break;
      }
      case TargetType::peak:
      case TargetType::diffusion_compare: {
        if (!t.kappa.empty()) {
          std::string list;
          for (const Vec3 &v : t.kappa) list += (list.empty() ? "" : "; ") + fmt_vec(v);
          put("kappa", list);
        }
        if (!t.lstar_kappa.empty() || t.type == TargetType::diffusion_compare) {
          std::string list;
          for (double x : t.lstar_kappa) list += (list.empty() ? "" : ", ") + fmt_double(x);
          put("lstar_kappa", list);
        }
        break;
      }
      case TargetType::factor_two:
        break;
    }
  }

  out += "\n[output]\n";
  if (!c.output.directory.empty()) put("directory", "\"" + c.output.directory + "\"");
  put("formats", c.output.json ? "csv, json" : "csv");
  return out;
}

Medium build_medium(const ScenarioConfig &c) {
  const MediumConfig &m = c.medium;
  ShapeFunction::Geometry geometry;
  switch (m.geometry) {
    case GeometryKind::ball:
      geometry = Ball{m.center, m.radius};
      break;
    case GeometryKind::box:
      geometry = Box{m.corner, m.extents};
      break;
    case GeometryKind::slab:
      geometry = Slab{m.thickness, m.half_width};
      break;
  }
  const ShapeFunction shape(geometry, m.density);
  const double inf = std::numeric_limits<double>::infinity();
  auto covariance = [&](double amplitude) {
    switch (m.covariance) {
      case CovarianceKind::gaussian:
        return Covariance::gaussian(amplitude, m.scale);
      case CovarianceKind::exponential:
        return Covariance::exponential(amplitude, m.scale);
      case CovarianceKind::constant:
        break;
    }
    return Covariance::gaussian(amplitude, inf);
  };
  const Dispersion dispersion(m.dispersion);
  if (m.amplitude) return Medium(shape, covariance(*m.amplitude), dispersion, m.model);
  if (!m.rate) throw ConfigError("medium needs an amplitude or a rate");
  const Medium unit(shape, covariance(1.0), dispersion, m.model);
  const double base = total_rate(unit, c.source.k);
  if (!(base > 0.0)) throw ConfigError("rate cannot be calibrated: the covariance vanishes on the shell");
  return unit.with_covariance(covariance(*m.rate / base));
}

std::string_view to_string(GeometryKind g) {
  for (const auto &[name, value] : kGeometries) {
    if (value == g) return name;
  }
  return "?";
}

std::string_view to_string(CovarianceKind c) {
  for (const auto &[name, value] : kCovariances) {
    if (value == c) return name;
  }
  return "?";
}

std::string_view to_string(TargetType t) {
  for (const auto &[name, value] : kTargetTypes) {
    if (value == t) return name;
  }
  return "?";
}

}  // namespace kinscat

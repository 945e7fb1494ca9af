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

#include "kinscat/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kinscat/errors.hpp"

namespace kinscat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double escape_weight(const ShellKernel &kernel, const ShapeFunction &shape, const Vec3 &x,
                     const Vec3 &p_in, const Vec3 &k_out, const Vec3 &v_out) {
  const double nu = kernel.total_rate();
  const double density = kernel.collision_kernel(p_in, k_out) / nu;
  if (density == 0.0) return 0.0;
  const double depth = nu * shape.ray_integral(x, v_out, 0.0,
                                               std::numeric_limits<double>::infinity());
  return density * std::exp(-depth);
}

void check_on_shell(const Experiment &e, const Vec3 &k_out) {
  if (!is_finite(k_out) || !(norm2(k_out) > 0.0)) {
    throw InvalidInput("outgoing momentum must be finite and nonzero");
  }
  const double eo = e.medium.dispersion().energy(k_out);
  if (!(std::abs(eo - e.energy()) <= 1e-9 * e.energy())) {
    throw InvalidInput("outgoing momentum is not on the incoming energy shell");
  }
  if (dot(normalized(k_out), e.source.direction) >= 1.0 - 1e-14) {
    throw InvalidInput("forward direction k' = k is excluded (forward singularity)");
  }
}

}  // namespace

AttenuationFactors attenuation_factors(const ShellKernel &kernel, const Vec3 &q, const Vec3 &p) {
  const ShapeFunction &shape = kernel.medium().shape();
  const Vec3 v = kernel.medium().dispersion().group_velocity(p);
  const double nu = kernel.total_rate();
  const double inf = std::numeric_limits<double>::infinity();
  return {std::exp(-nu * shape.ray_integral(q, v, 0.0, inf)),
          std::exp(-nu * shape.ray_integral(q, v, -inf, 0.0))};
}

Experiment Experiment::create(const Medium &medium, const Vec3 &k, double window_margin_mfp,
                              double plane_gap, const KernelOptions &kernel_options) {
  if (!is_finite(k) || !(norm2(k) > 0.0)) throw InvalidInput("incoming momentum must be finite and nonzero");
  ShellKernel kernel(medium, medium.dispersion().energy(k), kernel_options);
  double margin = window_margin_mfp * kernel.mean_free_path();
  if (!std::isfinite(margin)) margin = 0.0;
  SourceSpec source = SourceSpec::around(medium, k, margin, plane_gap);
  return {medium, std::move(kernel), source};
}

AngularBins::AngularBins(const Vec3 &polar_axis, int bands, int sectors)
    : frame_(make_frame(normalized(polar_axis))), bands_(bands), sectors_(sectors) {
  if (bands < 1 || sectors < 1) throw InvalidInput("angular bins need at least one band and sector");
}

std::size_t AngularBins::index_of(const Vec3 &direction) const {
  const Vec3 d = normalized(direction);
  const double mu = std::clamp(dot(d, frame_.w), -1.0, 1.0);
  double phi = std::atan2(dot(d, frame_.v), dot(d, frame_.u));
  if (phi < 0.0) phi += kTwoPi;
  const int band = std::clamp(static_cast<int>(std::floor((mu + 1.0) * 0.5 * bands_)), 0, bands_ - 1);
  const int sector = std::clamp(static_cast<int>(std::floor(phi / kTwoPi * sectors_)), 0, sectors_ - 1);
  return static_cast<std::size_t>(band) * sectors_ + sector;
}

AngularBins::Bin AngularBins::bin(std::size_t index) const {
  if (index >= size()) throw InvalidInput("bin index out of range");
  const int band = static_cast<int>(index / sectors_);
  const int sector = static_cast<int>(index % sectors_);
  const double dmu = 2.0 / bands_;
  const double dphi = kTwoPi / sectors_;
  return {band,
          sector,
          -1.0 + dmu * band,
          band == bands_ - 1 ? 1.0 : -1.0 + dmu * (band + 1),
          dphi * sector,
          sector == sectors_ - 1 ? kTwoPi : dphi * (sector + 1)};
}

double AngularBins::solid_angle(std::size_t index) const {
  const Bin b = bin(index);
  return (b.mu_hi - b.mu_lo) * (b.phi_hi - b.phi_lo);
}

Vec3 AngularBins::center(std::size_t index) const {
  const Bin b = bin(index);
  const double mu = 0.5 * (b.mu_lo + b.mu_hi);
  const double phi = 0.5 * (b.phi_lo + b.phi_hi);
  const double s = std::sqrt((1.0 - mu) * (1.0 + mu));
  return frame_.to_world(s * std::cos(phi), s * std::sin(phi), mu);
}

NeeTarget NeeTarget::point(const Vec3 &k_out) { return {{k_out}, {1.0}}; }

NeeTarget NeeTarget::bin_average(const AngularBins &bins, std::size_t index, double radius,
                                 int order) {
  const AngularBins::Bin b = bins.bin(index);
  const GaussLegendre gl = gauss_legendre(order);
  NeeTarget t;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double mu = 0.5 * (b.mu_lo + b.mu_hi) + 0.5 * (b.mu_hi - b.mu_lo) * gl.nodes[i];
    const double s = std::sqrt((1.0 - mu) * (1.0 + mu));
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double phi = 0.5 * (b.phi_lo + b.phi_hi) + 0.5 * (b.phi_hi - b.phi_lo) * gl.nodes[j];
      const Vec3 dir = bins.frame().to_world(s * std::cos(phi), s * std::sin(phi), mu);
      t.momenta.push_back(dir * (radius / norm(dir)));
      t.weights.push_back(0.25 * gl.weights[i] * gl.weights[j]);
    }
  }
  return t;
}

// --- analog ---------------------------------------------------------------

AnalogScorer::AnalogScorer(AngularBins bins) : bins_(bins), tallies_(bins.size()) {}

void AnalogScorer::on_finish(const Path &path) {
  tallies_.add_paths(1);
  if (!path.escaped || path.collisions.empty()) return;
  tallies_.add(bins_.index_of(path.final_momentum), 1.0);
}

AngularHistogram AnalogScorer::result(const Experiment &e, const RunStats &stats) const {
  AngularHistogram h{bins_, e.energy(), tallies_, {}, {}, stats};
  const double jacobian = e.medium.dispersion().shell_jacobian(e.energy());
  const double scale = e.scale();
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const double norm = scale / (bins_.solid_angle(i) * kTwoPi * jacobian);
    h.sigma.push_back(tallies_.real_estimate(i, norm));
    h.counts.push_back(static_cast<std::uint64_t>(tallies_.entry(i).sum.real()));
  }
  return h;
}

// --- next-event -------------------------------------------------------------

NeeScorer::NeeScorer(const Experiment &e, std::vector<NeeTarget> targets)
    : kernel_(&e.kernel),
      shape_(&e.medium.shape()),
      targets_(std::move(targets)),
      single_(targets_.size(), 0.0),
      multiple_(targets_.size(), 0.0),
      tallies_(3 * targets_.size()) {
  const Dispersion &disp = e.medium.dispersion();
  for (const NeeTarget &t : targets_) {
    if (t.momenta.empty() || t.momenta.size() != t.weights.size()) {
      throw InvalidInput("next-event target needs matching momenta and weights");
    }
    std::vector<Direction> dirs;
    for (std::size_t i = 0; i < t.momenta.size(); ++i) {
      check_on_shell(e, t.momenta[i]);
      dirs.push_back({t.momenta[i], disp.group_velocity(t.momenta[i]), t.weights[i]});
    }
    directions_.push_back(std::move(dirs));
  }
}

void NeeScorer::on_collision(const Path &, const CollisionEvent &event) {
  for (std::size_t t = 0; t < directions_.size(); ++t) {
    double score = 0.0;
    for (const Direction &d : directions_[t]) {
      score += d.weight * escape_weight(*kernel_, *shape_, event.position, event.p_in,
                                        d.momentum, d.velocity);
    }
    (event.index == 1 ? single_[t] : multiple_[t]) += score;
  }
}

void NeeScorer::on_finish(const Path &) {
  tallies_.add_paths(1);
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    if (single_[t] != 0.0 || multiple_[t] != 0.0) {
      tallies_.add(3 * t, single_[t]);
      tallies_.add(3 * t + 1, multiple_[t]);
      tallies_.add(3 * t + 2, single_[t] + multiple_[t]);
    }
    single_[t] = multiple_[t] = 0.0;
  }
}

std::vector<NeeResult> NeeScorer::result(const Experiment &e) const {
  std::vector<NeeResult> out;
  const double scale = e.scale();
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    NeeResult r;
    r.target = targets_[t];
    r.single = tallies_.real_estimate(3 * t, scale);
    r.multiple = tallies_.real_estimate(3 * t + 1, scale);
    r.total = {r.single.value + r.multiple.value, tallies_.stderr_re(3 * t + 2, scale)};
    out.push_back(std::move(r));
  }
  return out;
}

// --- backscattering peak ----------------------------------------------------

PeakScorer::PeakScorer(const Experiment &e, std::vector<Vec3> kappas)
    : kernel_(&e.kernel),
      shape_(&e.medium.shape()),
      back_momentum_(-e.k()),
      back_velocity_(e.medium.dispersion().group_velocity(-e.k())),
      kappas_(std::move(kappas)),
      coherent_(kappas_.size()),
      tallies_(2 + kappas_.size()) {
  const Vec3 khat = e.source.direction;
  for (const Vec3 &kappa : kappas_) {
    if (!is_finite(kappa)) throw InvalidInput("kappa must be finite");
    if (std::abs(dot(kappa, khat)) > 1e-12 * std::max(1.0, norm(kappa))) {
      throw InvalidInput("kappa must be transverse to k");
    }
  }
}

void PeakScorer::on_collision(const Path &, const CollisionEvent &event) {
  const double w = escape_weight(*kernel_, *shape_, event.position, event.p_in,
                                 back_momentum_, back_velocity_);
  if (event.index == 1) {
    first_position_ = event.position;
    single_ += w;
    return;
  }
  if (w == 0.0) return;
  incoherent_ += w;
  const Vec3 d = event.position - first_position_;
  for (std::size_t i = 0; i < kappas_.size(); ++i) {
    const double phase = dot(kappas_[i], d);
    coherent_[i] += std::complex<double>(w * std::cos(phase), w * std::sin(phase));
  }
}

void PeakScorer::on_finish(const Path &) {
  tallies_.add_paths(1);
  if (single_ != 0.0) tallies_.add(0, single_);
  if (incoherent_ != 0.0) {
    tallies_.add(1, incoherent_);
    for (std::size_t i = 0; i < kappas_.size(); ++i) tallies_.add(2 + i, coherent_[i]);
  }
  single_ = incoherent_ = 0.0;
  std::fill(coherent_.begin(), coherent_.end(), std::complex<double>{});
}

PeakProfile PeakScorer::result(const Experiment &e, const RunStats &stats) const {
  PeakProfile p;
  p.k = e.k();
  p.mean_free_path = e.kernel.mean_free_path();
  p.stats = stats;
  const double scale = e.scale();
  p.single = tallies_.real_estimate(0, scale);
  p.incoherent = tallies_.real_estimate(1, scale);
  const double b = p.incoherent.value;
  for (std::size_t i = 0; i < kappas_.size(); ++i) {
    PeakPoint pt;
    pt.kappa = kappas_[i];
    pt.coherent = tallies_.mean(2 + i, scale);
    pt.coherent_error = tallies_.stderr_re(2 + i, scale);
    pt.coherent_im_error = tallies_.stderr_im(2 + i, scale);
    if (std::abs(pt.coherent) > b) {
      throw NumericalError("coherent tally exceeds the incoherent background: |C(kappa)| > B");
    }
    pt.enhancement = b > 0.0 ? 1.0 + pt.coherent.real() / b
                             : std::numeric_limits<double>::quiet_NaN();
    p.points.push_back(pt);
  }
  return p;
}

// --- composite ----------------------------------------------------------------

void CompositeScorer::on_collision(const Path &path, const CollisionEvent &event) {
  for (auto &s : nee) s.on_collision(path, event);
  for (auto &s : peak) s.on_collision(path, event);
}

void CompositeScorer::on_finish(const Path &path) {
  for (auto &s : analog) s.on_finish(path);
  for (auto &s : nee) s.on_finish(path);
  for (auto &s : peak) s.on_finish(path);
}

void CompositeScorer::merge(const CompositeScorer &other) {
  if (other.analog.size() != analog.size() || other.nee.size() != nee.size() ||
      other.peak.size() != peak.size()) {
    throw InvalidInput("cannot merge composite scorers of different shapes");
  }
  for (std::size_t i = 0; i < analog.size(); ++i) analog[i].merge(other.analog[i]);
  for (std::size_t i = 0; i < nee.size(); ++i) nee[i].merge(other.nee[i]);
  for (std::size_t i = 0; i < peak.size(); ++i) peak[i].merge(other.peak[i]);
}

// --- drivers ----------------------------------------------------------------

AngularHistogram estimate_sigma_analog(const Experiment &e, const AngularBins &bins,
                                       const RunOptions &options) {
  RunStats stats;
  const AnalogScorer scorer =
      run_batches(e.source, e.kernel, e.medium.shape(), options, AnalogScorer(bins), &stats);
  return scorer.result(e, stats);
}

std::vector<NeeResult> estimate_sigma_nee(const Experiment &e, std::vector<NeeTarget> targets,
                                          const RunOptions &options, RunStats *stats) {
  const NeeScorer scorer = run_batches(e.source, e.kernel, e.medium.shape(), options,
                                       NeeScorer(e, std::move(targets)), stats);
  return scorer.result(e);
}

NeeResult estimate_sigma_nee(const Experiment &e, const Vec3 &k_out, const RunOptions &options) {
  return estimate_sigma_nee(e, {NeeTarget::point(k_out)}, options).front();
}

PeakProfile estimate_backscatter_peak(const Experiment &e, std::vector<Vec3> kappas,
                                      const RunOptions &options) {
  RunStats stats;
  const PeakScorer scorer = run_batches(e.source, e.kernel, e.medium.shape(), options,
                                        PeakScorer(e, std::move(kappas)), &stats);
  return scorer.result(e, stats);
}

FactorTwoResult factor_two_from(const PeakProfile &profile) {
  FactorTwoResult r;
  const PeakPoint *zero = nullptr;
  for (const PeakPoint &pt : profile.points) {
    if (pt.kappa == Vec3{}) {
      zero = &pt;
      break;
    }
  }
  if (!zero) throw InvalidInput("factor-two check needs kappa = 0 in the profile");
  r.incoherent = profile.incoherent.value;
  r.coherent_at_zero = zero->coherent.real();
  r.back_total = r.incoherent + r.coherent_at_zero;
  r.twice_incoherent = 2.0 * r.incoherent;
  // C(0) and B are the same tally, so the errors add linearly.
  r.combined_error = profile.incoherent.error + zero->coherent_error;
  r.enhancement = r.incoherent > 0.0 ? r.back_total / r.incoherent
                                     : std::numeric_limits<double>::quiet_NaN();
  r.single = profile.single;
  r.stats = profile.stats;
  return r;
}

FactorTwoResult factor_two_check(const Experiment &e, const RunOptions &options) {
  return factor_two_from(estimate_backscatter_peak(e, {Vec3{}}, options));
}

}  // namespace kinscat

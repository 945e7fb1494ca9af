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

#include <complex>
#include <cstdint>
#include <vector>

#include "kinscat/kernel.hpp"
#include "kinscat/tally.hpp"
#include "kinscat/transport.hpp"

namespace kinscat {

/// A scattering experiment at fixed incoming momentum: medium, shell kernel, source.
struct Experiment {
  Medium medium;
  ShellKernel kernel;
  SourceSpec source;

  /// Source disk = shadow radius + `window_margin_mfp` mean free paths.
  static Experiment create(const Medium &medium, const Vec3 &k,
                           double window_margin_mfp = 2.0, double plane_gap = 1.0,
                           const KernelOptions &kernel_options = {});

  const Vec3 &k() const { return source.k; }
  double energy() const { return kernel.energy(); }
  /// Per-path estimator weight; tally means are multiplied by it.
  double scale() const { return source.weight(); }
};

/// Escape attenuation ahead of q along grad omega(p), and survival from the
/// source side behind q: exp(-nu * rho-integral over [0, inf) and (-inf, 0]).
struct AttenuationFactors {
  double forward{1.0};
  double backward{1.0};
};

AttenuationFactors attenuation_factors(const ShellKernel &kernel, const Vec3 &q, const Vec3 &p);

/// Equal-area bands in cos(polar) times uniform azimuth sectors.
class AngularBins {
 public:
  struct Bin {
    int band;
    int sector;
    double mu_lo, mu_hi;
    double phi_lo, phi_hi;
  };

  AngularBins(const Vec3 &polar_axis, int bands, int sectors);

  int bands() const { return bands_; }
  int sectors() const { return sectors_; }
  std::size_t size() const { return static_cast<std::size_t>(bands_) * sectors_; }
  const Frame &frame() const { return frame_; }

  std::size_t index_of(const Vec3 &direction) const;
  Bin bin(std::size_t index) const;
  double solid_angle(std::size_t index) const;
  /// Direction at the bin's mid-cosine and mid-azimuth.
  Vec3 center(std::size_t index) const;

 private:
  Frame frame_;
  int bands_;
  int sectors_;
};

/// Binned escape directions. sigma = W count / (N dOmega 2 pi J(E)).
struct AngularHistogram {
  AngularBins bins;
  double energy{0.0};
  TallySet tallies;
  std::vector<RateEstimate> sigma;
  std::vector<std::uint64_t> counts;
  RunStats stats;

  /// Empty bins have zero value and infinite relative error.
  bool empty(std::size_t i) const { return counts[i] == 0; }
};

/// Outgoing momentum set for a next-event target: a single direction, or a
/// weighted quadrature over a bin for comparison with binned estimates.
struct NeeTarget {
  std::vector<Vec3> momenta;
  std::vector<double> weights;

  static NeeTarget point(const Vec3 &k_out);
  /// order x order Gauss-Legendre points in (mu, phi) on the bin, scaled to
  /// the shell `radius`; weights sum to 1.
  static NeeTarget bin_average(const AngularBins &bins, std::size_t index, double radius,
                               int order = 3);
};

struct NeeResult {
  NeeTarget target;
  RateEstimate total;     ///< value == single.value + multiple.value
  RateEstimate single;    ///< scores at the first collision
  RateEstimate multiple;  ///< scores at collisions 2, 3, ...
};

struct PeakPoint {
  Vec3 kappa;
  std::complex<double> coherent;
  double coherent_error{0.0};     ///< standard error of Re C
  double coherent_im_error{0.0};  ///< standard error of Im C
  double enhancement{0.0};        ///< 1 + Re C / B; NaN when B = 0
};

struct PeakProfile {
  Vec3 k;
  std::vector<PeakPoint> points;
  RateEstimate incoherent;  ///< B: multiple-scattering background toward -k
  RateEstimate single;      ///< S1: single-scattering rate toward -k
  double mean_free_path{0.0};
  RunStats stats;
};

struct FactorTwoResult {
  double back_total{0.0};        ///< B + C(0)
  double twice_incoherent{0.0};  ///< 2 B
  double combined_error{0.0};
  double incoherent{0.0};
  double coherent_at_zero{0.0};
  double enhancement{0.0};       ///< (B + C(0)) / B; NaN when B = 0
  RateEstimate single;
  RunStats stats;
};

/// Analog estimator: bins the final direction of escaped, scattered paths.
class AnalogScorer final : public PathObserver {
 public:
  explicit AnalogScorer(AngularBins bins);

  void on_collision(const Path &, const CollisionEvent &) override {}
  void on_finish(const Path &path) override;
  void merge(const AnalogScorer &other) { tallies_.merge(other.tallies_); }

  const AngularBins &bins() const { return bins_; }
  const TallySet &tallies() const { return tallies_; }
  AngularHistogram result(const Experiment &experiment, const RunStats &stats) const;

 private:
  AngularBins bins_;
  TallySet tallies_;
};

/// Next-event estimator: at each collision, the kernel density toward k'
/// divided by nu, times the escape attenuation along k'.
class NeeScorer final : public PathObserver {
 public:
  /// Throws InvalidInput for k' off the shell or k' = k.
  NeeScorer(const Experiment &experiment, std::vector<NeeTarget> targets);

  void on_collision(const Path &path, const CollisionEvent &event) override;
  void on_finish(const Path &path) override;
  void merge(const NeeScorer &other) { tallies_.merge(other.tallies_); }

  const TallySet &tallies() const { return tallies_; }
  std::vector<NeeResult> result(const Experiment &experiment) const;

 private:
  struct Direction {
    Vec3 momentum;
    Vec3 velocity;
    double weight;
  };
  const ShellKernel *kernel_;
  const ShapeFunction *shape_;
  std::vector<NeeTarget> targets_;
  std::vector<std::vector<Direction>> directions_;
  std::vector<double> single_;
  std::vector<double> multiple_;
  TallySet tallies_;
};

/// Phase-weighted backscattering tally toward -k.
///
/// Collision 1 scores the single-scattering term. Every later collision j
/// scores w_j into B and w_j exp(i kappa . (x_j - x_1)) into C(kappa).
class PeakScorer final : public PathObserver {
 public:
  /// Throws InvalidInput when some kappa is not transverse to k.
  PeakScorer(const Experiment &experiment, std::vector<Vec3> kappas);

  void on_collision(const Path &path, const CollisionEvent &event) override;
  void on_finish(const Path &path) override;
  void merge(const PeakScorer &other) { tallies_.merge(other.tallies_); }

  const std::vector<Vec3> &kappas() const { return kappas_; }
  const TallySet &tallies() const { return tallies_; }
  PeakProfile result(const Experiment &experiment, const RunStats &stats) const;

 private:
  const ShellKernel *kernel_;
  const ShapeFunction *shape_;
  Vec3 back_momentum_;
  Vec3 back_velocity_;
  std::vector<Vec3> kappas_;
  Vec3 first_position_;
  double single_{0.0};
  double incoherent_{0.0};
  std::vector<std::complex<double>> coherent_;
  TallySet tallies_;
};

/// Several scorers fed by one set of paths.
class CompositeScorer final : public PathObserver {
 public:
  std::vector<AnalogScorer> analog;
  std::vector<NeeScorer> nee;
  std::vector<PeakScorer> peak;

  void on_collision(const Path &path, const CollisionEvent &event) override;
  void on_finish(const Path &path) override;
  void merge(const CompositeScorer &other);
};

AngularHistogram estimate_sigma_analog(const Experiment &experiment, const AngularBins &bins,
                                       const RunOptions &options);

std::vector<NeeResult> estimate_sigma_nee(const Experiment &experiment,
                                          std::vector<NeeTarget> targets,
                                          const RunOptions &options,
                                          RunStats *stats = nullptr);

NeeResult estimate_sigma_nee(const Experiment &experiment, const Vec3 &k_out,
                             const RunOptions &options);

PeakProfile estimate_backscatter_peak(const Experiment &experiment, std::vector<Vec3> kappas,
                                      const RunOptions &options);

FactorTwoResult factor_two_check(const Experiment &experiment, const RunOptions &options);
FactorTwoResult factor_two_from(const PeakProfile &profile);

struct QuadratureOptions {
  double rel_tol{1e-8};
  /// false sets nu = 0 inside the attenuation exponent only.
  bool attenuation{true};
  int max_depth{20};
};

struct QuadratureValue {
  double value{0.0};
  double error{0.0};
};

/// Deterministic single-scattering rate from k into k_out:
/// collision_kernel(k, k_out) * integral of rho(x) exp(-nu(k) A_in(x) - nu(k_out) A_out(x)),
/// with A_in / A_out the rho-integrals behind x along k and ahead of x along k_out.
/// Throws NumericalError if the estimated error exceeds the tolerance.
QuadratureValue single_scattering_quadrature(const Medium &medium, const Vec3 &k,
                                             const Vec3 &k_out,
                                             const QuadratureOptions &options = {});

}  // namespace kinscat

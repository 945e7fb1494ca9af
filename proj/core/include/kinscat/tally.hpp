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

namespace kinscat {

struct RateEstimate {
  double value{0.0};
  double error{0.0};  ///< one standard error

  double relative_error() const;
};

/// Complex Monte Carlo accumulators over independent paths.
///
/// Each path contributes at most one value per entry (a path total), so the
/// spread of path totals gives the standard error. Paths that contribute
/// nothing are counted through `add_paths` only. Sums are plain left-to-right
/// additions: merging tallies in a fixed order is reproducible bit-for-bit,
/// and the ordering |sum(a_i)| <= sum(b_i) survives rounding whenever
/// |a_i| <= b_i path by path.
class TallySet {
 public:
  struct Entry {
    std::complex<double> sum{};
    double sum_sq_re{0.0};
    double sum_sq_im{0.0};
  };

  explicit TallySet(std::size_t entries = 0) : entries_(entries) {}

  std::size_t size() const { return entries_.size(); }
  std::uint64_t paths() const { return paths_; }
  const Entry &entry(std::size_t i) const { return entries_[i]; }

  void add(std::size_t i, std::complex<double> path_total) {
    Entry &e = entries_[i];
    e.sum += path_total;
    e.sum_sq_re += path_total.real() * path_total.real();
    e.sum_sq_im += path_total.imag() * path_total.imag();
  }
  void add(std::size_t i, double path_total) {
    Entry &e = entries_[i];
    e.sum.real(e.sum.real() + path_total);
    e.sum_sq_re += path_total * path_total;
  }
  void add_paths(std::uint64_t n) { paths_ += n; }

  /// Entry-wise sum; both sets must have the same size.
  void merge(const TallySet &other);

  /// Mean per path times `scale`, real and imaginary parts.
  std::complex<double> mean(std::size_t i, double scale = 1.0) const;
  /// Standard error of the real part of the scaled mean.
  double stderr_re(std::size_t i, double scale = 1.0) const;
  double stderr_im(std::size_t i, double scale = 1.0) const;
  /// sqrt(stderr_re^2 + stderr_im^2): error of the complex mean in modulus.
  double stderr_abs(std::size_t i, double scale = 1.0) const;

  RateEstimate real_estimate(std::size_t i, double scale = 1.0) const {
    return {mean(i, scale).real(), stderr_re(i, scale)};
  }

 private:
  std::vector<Entry> entries_;
  std::uint64_t paths_{0};
};

}  // namespace kinscat

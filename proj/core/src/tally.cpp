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

#include "kinscat/tally.hpp"

#include <cmath>
#include <limits>

#include "kinscat/errors.hpp"

namespace kinscat {

namespace {

double standard_error(double sum, double sum_sq, std::uint64_t n, double scale) {
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sum_sq / dn - mean * mean) * dn / (dn - 1.0));
  return std::abs(scale) * std::sqrt(var / dn);
}

}  // namespace

double RateEstimate::relative_error() const {
  if (value == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(error / value);
}

void TallySet::merge(const TallySet &other) {
  if (other.entries_.size() != entries_.size()) {
    throw InvalidInput("cannot merge tally sets of different sizes");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].sum += other.entries_[i].sum;
    entries_[i].sum_sq_re += other.entries_[i].sum_sq_re;
    entries_[i].sum_sq_im += other.entries_[i].sum_sq_im;
  }
  paths_ += other.paths_;
}

std::complex<double> TallySet::mean(std::size_t i, double scale) const {
  if (paths_ == 0) return {};
  const std::complex<double> s = entries_[i].sum;
  const double dn = static_cast<double>(paths_);
  return {scale * (s.real() / dn), scale * (s.imag() / dn)};
}

double TallySet::stderr_re(std::size_t i, double scale) const {
  return standard_error(entries_[i].sum.real(), entries_[i].sum_sq_re, paths_, scale);
}

double TallySet::stderr_im(std::size_t i, double scale) const {
  return standard_error(entries_[i].sum.imag(), entries_[i].sum_sq_im, paths_, scale);
}

double TallySet::stderr_abs(std::size_t i, double scale) const {
  return std::hypot(stderr_re(i, scale), stderr_im(i, scale));
}

}  // namespace kinscat

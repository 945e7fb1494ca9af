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

#include <array>
#include <cstdint>

namespace kinscat {

/// Philox4x32-10 counter-based generator.
///
/// Stream derivation (stable, so that other implementations can replay a run):
///   key     = splitmix64(splitmix64(master_seed) ^ batch_index), split lo/hi
///   counter = 128-bit block index starting at 0 (word 0 least significant)
/// Each 128-bit block yields two 64-bit outputs, low pair first:
///   out0 = w0 | (w1 << 32), out1 = w2 | (w3 << 32).
/// Uniform doubles take the top 53 bits: (x >> 11) * 2^-53.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(Key key) : key_(key) {}

  /// The raw bijection: ten Philox rounds of `counter` under `key`.
  static Block block(Block counter, Key key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_positive() {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard exponential variate, -log(U) with U in (0, 1].
  double exponential();

  std::uint64_t blocks_used() const { return block_index_; }

 private:
  Key key_;
  std::uint64_t block_index_{0};
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_{0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream for one batch of paths; see the class comment for the derivation.
Philox4x32 make_stream(std::uint64_t master_seed, std::uint64_t batch_index);

}  // namespace kinscat

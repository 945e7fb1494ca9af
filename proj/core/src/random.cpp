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

#include "kinscat/random.hpp"

#include <cmath>

namespace kinscat {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &lo,
                    std::uint32_t &hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

Philox4x32::Block Philox4x32::block(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (buffered_ == 0) {
    const Block ctr{static_cast<std::uint32_t>(block_index_),
                    static_cast<std::uint32_t>(block_index_ >> 32), 0u, 0u};
    const Block out = block(ctr, key_);
    ++block_index_;
    buffer_[0] = out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
    buffer_[1] = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double Philox4x32::exponential() { return -std::log(uniform_positive()); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Philox4x32 make_stream(std::uint64_t master_seed, std::uint64_t batch_index) {
  const std::uint64_t k = splitmix64(splitmix64(master_seed) ^ batch_index);
  return Philox4x32(
      {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)});
}

}  // namespace kinscat

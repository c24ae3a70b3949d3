// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Counter-based random numbers (Philox4x32-10).
//
// Stream-splitting rule: every consumer names its stream as
// "<module>/<purpose>" (for example "channel/siso_amplitudes"). The 64-bit
// Philox key is splitmix64(seed ^ splitmix64(fnv1a64(name))). Within a
// stream, block j of sample i uses the counter
//   (lo32(j), hi32(j), lo32(i), hi32(i)),
// so any sample can be regenerated in isolation and disjoint sample ranges
// can be produced concurrently with bit-identical results.
//
// Each 128-bit block yields two uniforms on the open interval (0, 1): words
// (0, 1) form the first 64-bit integer, words (2, 3) the second, and the top
// 52 bits of each become (2m + 1) * 2^-53.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string_view>

namespace irsec::rng {

using PhiloxKey = std::array<std::uint32_t, 2>;
using PhiloxCounter = std::array<std::uint32_t, 4>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

constexpr PhiloxKey derive_key(std::uint64_t seed, std::string_view stream) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(fnv1a64(stream)));
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

constexpr PhiloxCounter block_counter(std::uint64_t sample, std::uint64_t block) {
  return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
          static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)};
}

// (2m + 1) * 2^-53 with m the top 52 bits of `bits`; always in (0, 1).
inline double open_unit(std::uint64_t bits) {
  const double one_to_two = std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ull);
  return (one_to_two - 1.0) + 0x1p-53;
}

struct UniformPair {
  double first;
  double second;
};

inline UniformPair uniforms(const PhiloxCounter& out) {
  const std::uint64_t a = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  return {open_unit(a), open_unit(b)};
}

// Convenience wrapper for scalar draws outside the hot kernels.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view name) : key_(derive_key(seed, name)) {}

  const PhiloxKey& key() const { return key_; }

  UniformPair pair(std::uint64_t sample, std::uint64_t block = 0) const {
    return uniforms(philox4x32_10(block_counter(sample, block), key_));
  }

  // Uniform integer in [0, n) from one block, n < 2^32. Computes
  // floor(x * n / 2^64) for the 64-bit word x.
  std::uint64_t below(std::uint32_t n, std::uint64_t sample, std::uint64_t block = 0) const {
    const auto out = philox4x32_10(block_counter(sample, block), key_);
    const std::uint64_t lo = static_cast<std::uint64_t>(out[0]) * n;
    const std::uint64_t hi = static_cast<std::uint64_t>(out[1]) * n;
    return (hi + (lo >> 32)) >> 32;
  }

 private:
  PhiloxKey key_;
};

}  // namespace irsec::rng

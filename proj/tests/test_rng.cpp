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

#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "irsec/rng.hpp"

using namespace irsec::rng;

TEST_CASE("philox4x32-10 known answers") {
  // Reference vectors of the Random123 distribution.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("philox is usable at compile time") {
  constexpr auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST_CASE("open_unit stays inside (0, 1)") {
  CHECK(open_unit(0) == 0x1p-53);
  CHECK(open_unit(0) > 0.0);
  CHECK(open_unit(~0ull) < 1.0);
  CHECK(open_unit(~0ull) == 1.0 - 0x1p-53);
}

TEST_CASE("stream keys depend on seed and name") {
  std::set<std::array<std::uint32_t, 2>> keys;
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    for (const char* name : {"channel/siso_amplitudes", "channel/miso_gains", "mcoracle/bootstrap"}) {
      keys.insert(derive_key(seed, name));
    }
  }
  CHECK(keys.size() == 9);
  CHECK(derive_key(5, "a/b") == derive_key(5, "a/b"));
}

TEST_CASE("stream draws are addressable and reproducible") {
  const Stream s(42, "test/stream");
  const auto a = s.pair(10, 3);
  const auto b = Stream(42, "test/stream").pair(10, 3);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != s.pair(10, 4).first);
  CHECK(a.first != s.pair(11, 3).first);
}

TEST_CASE("below is in range and roughly uniform") {
  const Stream s(7, "test/below");
  std::array<int, 10> counts{};
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto v = s.below(10, i);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (const int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("uniform mean and variance") {
  const Stream s(3, "test/uniform");
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto u = s.pair(static_cast<std::uint64_t>(i));
    sum += u.first + u.second;
    sum2 += u.first * u.first + u.second * u.second;
  }
  const double m = sum / (2.0 * n);
  CHECK(m == doctest::Approx(0.5).epsilon(0.005));
  CHECK(sum2 / (2.0 * n) - m * m == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

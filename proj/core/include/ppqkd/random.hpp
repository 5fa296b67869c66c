// Copyright 2026 The ppqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace ppqkd {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-consumer random stream.
///
/// Streams are keyed by (master seed, counter): stream `i` of seed `s` is the
/// same sequence no matter which thread builds it or in which order, so a
/// protocol run can hand round `i` its own stream and stay bit-identical
/// under any scheduling. Uniform doubles are produced from the top 53 bits of
/// the engine output rather than through `std::uniform_real_distribution`,
/// whose algorithm differs between standard libraries.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    RandomStream(std::uint64_t master_seed, std::uint64_t counter)
        : engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~counter))) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Fair coin.
    bool coin() { return (engine_() >> 63) != 0; }

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ppqkd

// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace qmeas {

// std:: engines would do statistically, but their distributions are not
// bit-portable across standard libraries. Record streams must be
// reproducible bit-for-bit, so the generator and the uint64 -> [0,1)
// mapping are spelled out here. splitmix64 / xoshiro256** are the public
// domain generators by Vigna (and Blackman).

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto &w : s_) w = sm.next();
    }

    /// Independent stream for one chunk of a run: the stream depends only on
    /// (seed, chunk_index), never on which thread processes the chunk. Both
    /// inputs go through a full avalanche before state expansion; seeding
    /// xoshiro at merely-shifted splitmix offsets would hand adjacent chunks
    /// overlapping state words.
    static Xoshiro256ss for_chunk(std::uint64_t seed, std::uint64_t chunk_index) {
        std::uint64_t a = SplitMix64{seed}.next();
        std::uint64_t b = SplitMix64{chunk_index ^ 0xA3C59AC2ED9D86C5ULL}.next();
        return Xoshiro256ss(a ^ b);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace qmeas

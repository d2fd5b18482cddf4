// Copyright 2026 the smecorr authors.
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

#include "smecorr/rng.hpp"

#include <cmath>

namespace smecorr::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// splitmix64 finalizer; bijective, so distinct inputs give distinct keys
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        philox_round(counter, key);
    }
    return counter;
}

Stream Stream::for_trajectory(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    return Stream(mix64(master_seed ^ mix64(trajectory_index)));
}

double Stream::uniform(std::uint64_t step, std::uint32_t channel, std::uint32_t slot) const {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(step),
                                              static_cast<std::uint32_t>(step >> 32), channel,
                                              slot};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                              static_cast<std::uint32_t>(key_ >> 32)};
    const auto out = philox4x32(ctr, key);
    return to_unit_double(out[0], out[1]);
}

double Stream::normal(std::uint64_t step, std::uint32_t channel, std::uint32_t slot) const {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(step),
                                              static_cast<std::uint32_t>(step >> 32), channel,
                                              slot};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                              static_cast<std::uint32_t>(key_ >> 32)};
    const auto out = philox4x32(ctr, key);
    // u1 in (0,1] so the log is finite; u2 in [0,1)
    const std::uint64_t b1 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const double u1 = (static_cast<double>(b1 >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = to_unit_double(out[2], out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace smecorr::rng

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

#ifndef SMECORR_RNG_HPP
#define SMECORR_RNG_HPP

#include <array>
#include <cstdint>

namespace smecorr::rng {

/// Philox4x32-10 block function (counter-based, Random123 family).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// One independent stream per (master seed, trajectory index). Draws are
/// addressed, not sequenced: any (step, channel, slot) triple can be replayed
/// without running the stream forward, which keeps ensembles embarrassingly
/// parallel and single-step decisions reproducible in tests.
class Stream {
public:
    static Stream for_trajectory(std::uint64_t master_seed, std::uint64_t trajectory_index);

    /// Uniform on [0, 1).
    double uniform(std::uint64_t step, std::uint32_t channel, std::uint32_t slot) const;

    /// Standard normal (Box-Muller on one Philox block).
    double normal(std::uint64_t step, std::uint32_t channel, std::uint32_t slot) const;

    std::uint64_t key() const noexcept { return key_; }

private:
    explicit Stream(std::uint64_t key) : key_(key) {}
    std::uint64_t key_ = 0;
};

}  // namespace smecorr::rng

#endif

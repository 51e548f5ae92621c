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

#pragma once

// Counter-based random streams.
//
// Every random draw in a campaign is addressed by (master seed, stream id,
// block counter), so results do not depend on how work is scheduled across
// threads. The generator is Philox4x32-10.

#include <array>
#include <cstdint>
#include <limits>

namespace rydsrc {

/// Philox4x32 with 10 rounds: the pure bijection on a 128-bit counter.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// What a stream is used for; part of the stream id.
enum class StreamPurpose : std::uint8_t {
    Cloud = 1,
    Dephasing = 2,
    OverlapPairs = 3,
    Validation = 4,
    Test = 255,
};

/// UniformRandomBitGenerator over a Philox counter sequence.
///
/// The key is the 64-bit seed, the upper 64 counter bits are the stream id
/// and the lower 64 counter bits enumerate 128-bit output blocks.
class RandomStream {
public:
    using result_type = std::uint32_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in (0, 1), 53 random bits.
    double uniform_open();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned next_ = 4;
};

/// Stream id of realization `index` for a purpose.
constexpr std::uint64_t stream_id(std::uint64_t index, StreamPurpose purpose)
{
    return (index << 8) | static_cast<std::uint64_t>(purpose);
}

/// Stream for realization `index` and a given purpose.
RandomStream make_stream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose);

} // namespace rydsrc

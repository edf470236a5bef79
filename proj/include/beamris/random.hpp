// SPDX-License-Identifier: Apache-2.0
//
// beamris: multi-RIS aided mmWave beamspace MIMO simulation and optimization
// Copyright (C) 2026 The beamris authors
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

#ifndef beamris_random_H
#define beamris_random_H

#include <cstdint>
#include <random>

namespace beamris
{
    // Every stochastic operation takes an explicit stream; nothing global.
    using Rng = std::mt19937_64;

    // SplitMix64 finalizer. Good avalanche, used to decorrelate derived seeds.
    constexpr std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Order-sensitive combination of a root seed with any number of indices
    template <typename... Ix>
    constexpr std::uint64_t derive_seed(std::uint64_t root, Ix... indices)
    {
        std::uint64_t s = mix_seed(root);
        ((s = mix_seed(s ^ mix_seed(static_cast<std::uint64_t>(indices) + 0x632BE59BD9B4E019ULL))), ...);
        return s;
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
}

#endif

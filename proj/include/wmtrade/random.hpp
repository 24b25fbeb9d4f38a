// Copyright 2026 The wmtrade Authors
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

// Deterministic random sub-streams. Every (state, setting, configuration)
// cell draws from its own engine, seeded by mixing the master seed with the
// cell key, so results do not depend on evaluation order or thread count.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace wmtrade {

using Rng = std::mt19937_64;

/// Which part of a run a sub-stream feeds.
enum class StreamKind : std::uint64_t {
    counts = 1,
    tomography = 2,
    haar = 3,
    property_samples = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t k : key) {
        h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

inline Rng make_stream(std::uint64_t master, StreamKind kind, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = derive_seed(master, key);
    h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

}  // namespace wmtrade

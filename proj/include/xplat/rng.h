// Copyright 2026 The xplat Authors
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

#ifndef XPLAT_RNG_H
#define XPLAT_RNG_H

#include <cstdint>
#include <random>
#include <string_view>

namespace xplat {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a over bytes. Stable across platforms; used for substream names
/// and manifest hashes.
uint64_t fnv1a64(std::string_view bytes);

/// Derives an independent seed for the named substream `stream` (and an optional
/// task index) from a master seed. Every random consumer in the toolkit draws
/// from such a derived generator, so results never depend on scheduling.
uint64_t derive_seed(uint64_t master, std::string_view stream, uint64_t index = 0);

inline Rng make_rng(uint64_t master, std::string_view stream, uint64_t index = 0) {
    return Rng(derive_seed(master, stream, index));
}

}  // namespace xplat

#endif

/*
 * Copyright 2026 The epointda Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EPOINTDA_NUMERICS_RNG_H_
#define EPOINTDA_NUMERICS_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace epointda {
namespace numerics {

using Rng = std::mt19937_64;

// Mixes a base seed with stream indices (splitmix64 finalizer) so that
// per-frame or per-cell generators are independent of execution order.
inline uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> path) {
  uint64_t z = base;
  for (const uint64_t index : path) {
    z += 0x9e3779b97f4a7c15ULL + index;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
  }
  return z;
}

// Uniform double in [0, 1) using the top 53 bits; unlike
// std::uniform_real_distribution it is identical across standard libraries.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformRange(Rng& rng, double low, double high) {
  return low + (high - low) * UniformUnit(rng);
}

// Uniform integer in [0, n).
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  return static_cast<uint64_t>(UniformUnit(rng) * static_cast<double>(n)) % n;
}

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_RNG_H_

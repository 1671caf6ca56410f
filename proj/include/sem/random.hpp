// Copyright 2026  The sem-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEM_RANDOM_HPP_
#define SEM_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace sem {

using Rng = std::mt19937_64;

// 64-bit FNV-1a over the bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the per-utterance random stream. Depends only on the global seed
/// and the utterance id, never on processing order.
constexpr std::uint64_t utterance_seed(std::uint64_t seed,
                                       std::string_view utterance_id) noexcept {
  return mix64(mix64(seed) ^ fnv1a64(utterance_id));
}

inline Rng utterance_rng(std::uint64_t seed, std::string_view utterance_id) {
  return Rng(utterance_seed(seed, utterance_id));
}

/// Uniform double in [0, 1) built from the top 53 bits of one engine output.
/// Used instead of std::uniform_real_distribution, whose output sequence is
/// library-specific and may round up to 1.
inline double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sem

#endif  // SEM_RANDOM_HPP_

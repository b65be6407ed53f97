#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The xmkt Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Keyed random streams. Every (seed, sample, agent) triple maps to its own
// stream, so a draw never depends on how samples are scheduled.

#include <cstdint>
#include <random>

namespace xmkt {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t sample,
                                   std::uint64_t agent) noexcept
{
  return mix64(mix64(mix64(seed) ^ sample) ^ (agent + 0x632BE59BD9B4E019ULL));
}

/// Uniform in [0,1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept
{
  return static_cast<double>(bits >> 11U) * 0x1.0p-53;
}

/// The draw that sets agent `agent`'s type in sample `sample`.
constexpr double stream_uniform(std::uint64_t seed, std::uint64_t sample,
                                std::uint64_t agent) noexcept
{
  return to_unit(stream_key(seed, sample, agent));
}

/// A full engine for auxiliary draws (misreports, fixings) tied to one key.
inline std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t sample, std::uint64_t agent,
                                    std::uint64_t purpose)
{
  return std::mt19937_64(stream_key(seed ^ mix64(purpose), sample, agent));
}

}  // namespace xmkt

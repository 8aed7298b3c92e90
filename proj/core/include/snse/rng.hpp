#pragma once

#include <array>
#include <cstdint>

namespace snse::rng {

// Philox 4x64 with 10 rounds. Counter-based: every block of four 64-bit
// outputs is a pure function of (key, counter), so draws are reproducible
// independent of evaluation order across threads.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 2> key,
                                        std::array<std::uint64_t, 4> ctr);

// Two standard normals from one Philox block via Box-Muller.
std::array<double, 2> normal_pair(const std::array<std::uint64_t, 2>& key,
                                  const std::array<std::uint64_t, 4>& ctr);

// Domain separators for the counter's third word. Distinct domains make the
// draw streams for noise increments, initial data, and test corpora
// non-overlapping under one user seed.
inline constexpr std::uint64_t kDomainWiener = 1;
inline constexpr std::uint64_t kDomainField = 2;
inline constexpr std::uint64_t kDomainCorpus = 3;

// splitmix64 step, used to derive per-realization sub-seeds.
std::uint64_t mix(std::uint64_t a, std::uint64_t b);

}  // namespace snse::rng

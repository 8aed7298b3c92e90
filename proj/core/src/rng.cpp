#include "snse/rng.hpp"

#include <cmath>

namespace snse::rng {
namespace {

constexpr double kTau = 6.283185307179586476925286766559;
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) >> 64);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 2> key,
                                        std::array<std::uint64_t, 4> ctr) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t hi0 = mulhi(kMul0, ctr[0]);
    const std::uint64_t lo0 = kMul0 * ctr[0];
    const std::uint64_t hi1 = mulhi(kMul1, ctr[2]);
    const std::uint64_t lo1 = kMul1 * ctr[2];
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<double, 2> normal_pair(const std::array<std::uint64_t, 2>& key,
                                  const std::array<std::uint64_t, 4>& ctr) {
  const auto block = philox4x64(key, ctr);
  // 53-bit mantissas in (0,1]; u1 > 0 keeps the log finite.
  const double u1 = (static_cast<double>(block[0] >> 11) + 1.0) * 0x1p-53;
  const double u2 = static_cast<double>(block[1] >> 11) * 0x1p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(kTau * u2), r * std::sin(kTau * u2)};
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace snse::rng

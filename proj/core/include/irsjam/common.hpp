#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irsjam {

using Rng = std::mt19937_64;
using cxd = std::complex<double>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

/// SplitMix64 finalizer. Derives independent substream seeds from a base
/// seed and a tag, so that adding or resizing one consumer does not perturb
/// the draws seen by another.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream tags used by the environment and channel sampler.
namespace seed_tag {
inline constexpr std::uint64_t placement = 1;
inline constexpr std::uint64_t fading = 2;
inline constexpr std::uint64_t jammer = 3;
inline constexpr std::uint64_t observation = 4;
inline constexpr std::uint64_t train = 5;
}  // namespace seed_tag

}  // namespace irsjam

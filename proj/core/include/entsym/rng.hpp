#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace entsym::rng {

// splitmix64 finalizer; good avalanche, used to derive independent
// substreams from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Engine for sample k of the stream identified by seed. Pure function of
// (seed, k), so samples can be drawn in any order on any number of workers.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t k) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(k + 0x51ed2701ULL)));
}

// Uniform double in (0, 1]; built from raw bits so the stream does not
// depend on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal pair via Box-Muller.
inline void normal_pair(std::mt19937_64& eng, double& z0, double& z1) {
  const double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(t);
  z1 = r * std::sin(t);
}

inline double normal(std::mt19937_64& eng) {
  double z0, z1;
  normal_pair(eng, z0, z1);
  return z0;
}

// Standard complex normal: real and imaginary parts each N(0, 1/2).
inline std::complex<double> complex_normal(std::mt19937_64& eng) {
  double z0, z1;
  normal_pair(eng, z0, z1);
  return {z0 * std::numbers::sqrt2 / 2.0, z1 * std::numbers::sqrt2 / 2.0};
}

} // namespace entsym::rng

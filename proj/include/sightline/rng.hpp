#pragma once

#include <cstdint>
#include <random>

#include "sightline/vec.hpp"

namespace sightline {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream id for batch `batch` of task `task` under a master seed. Streams
/// never get reused across tasks; estimators pass their own task tag.
inline std::uint64_t stream_id(std::uint64_t master, std::uint64_t task, std::uint64_t batch) {
  std::uint64_t h = mix64(master ^ 0xA0761D6478BD642Full);
  h = mix64(h ^ (task + 1) * 0xE7037ED1A0B428DBull);
  h = mix64(h ^ (batch + 1) * 0x8EBC6AF09C88C6E3ull);
  return h;
}

inline Rng make_stream(std::uint64_t master, std::uint64_t task, std::uint64_t batch) {
  return Rng(stream_id(master, task, batch));
}

// Task tags for stream derivation. One tag per independent sampling concern.
namespace stream_tag {
inline constexpr std::uint64_t kEstimateF = 0x11;
inline constexpr std::uint64_t kEstimatePvis = 0x12;
inline constexpr std::uint64_t kCapacity = 0x13;
inline constexpr std::uint64_t kCapacityPair = 0x14;
inline constexpr std::uint64_t kSymdiff = 0x15;
inline constexpr std::uint64_t kMuUnion = 0x16;
inline constexpr std::uint64_t kSceneForward = 0x21;
inline constexpr std::uint64_t kSceneBackward = 0x22;
}  // namespace stream_tag

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline std::int64_t sample_poisson(double mean, Rng& rng) {
  if (mean <= 0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

inline Vec gaussian_vec(int d, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = nd(rng);
  return v;
}

inline Vec uniform_on_sphere(int d, double radius, Rng& rng) {
  for (;;) {
    Vec g = gaussian_vec(d, rng);
    double n = norm(g);
    if (n > 1e-12) return g *= radius / n;
  }
}

inline Vec uniform_in_ball(int d, double radius, Rng& rng) {
  Vec v = uniform_on_sphere(d, radius, rng);
  return v *= std::pow(uniform01(rng), 1.0 / d);
}

}  // namespace sightline

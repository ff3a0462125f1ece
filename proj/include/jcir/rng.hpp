#pragma once

#include <cstdint>

namespace jcir {

// Reproducible random streams.  Every Monte Carlo consumer derives its own
// stream from (master seed, stream tag, worker/path index), so results do not
// depend on thread scheduling and a run is identical for identical seeds.

// SplitMix64 finalizer (Steele, Lea, Vigna); used for key hashing and to
// expand a 64-bit key into engine state.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum class StreamTag : std::uint64_t {
  CirSample = 1,
  BesselSample,
  RhoSample,
  ZSample,
  ExactMarginal,
  EulerPath,
  Skeleton,
  Ergodicity,
  Bootstrap,
  InvariantSample,
  McCf,
  Lyapunov,
  Reference,
  Test,
};

// xoshiro256++ (Blackman & Vigna 2019).  State seeded from a 64-bit key via
// SplitMix64, the authors' recommended procedure.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) {
    std::uint64_t z = key;
    for (auto& w : s_) {
      z = mix64(z + 0x9e3779b97f4a7c15ull);
      w = z;
    }
    s_[0] |= 1;  // all-zero state is invalid
  }

  static Rng stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
    std::uint64_t key = mix64(seed ^ 0x5bf0f1199b4c1071ull);
    key = mix64(key ^ (0x100000001b3ull * (static_cast<std::uint64_t>(tag) + 1)));
    key = mix64(key ^ (index + 0xd1b54a32d192ed03ull));
    return Rng(key);
  }

  std::uint64_t operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Uniform on the open interval (0,1); safe as a log() or 1-u argument.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

double normal(Rng& rng);
double exponential(Rng& rng, double rate);
// Exact Poisson draw for any mean >= 0 (inversion, chunked for large means).
std::uint64_t poisson(Rng& rng, double mean);
// Exact gamma draw; shape == 0 returns 0.
double gamma_draw(Rng& rng, double shape, double scale);

}  // namespace jcir

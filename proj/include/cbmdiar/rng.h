// cbmdiar/rng.h
//
// Copyright (c)  2026  cbmdiar authors

#ifndef CBMDIAR_RNG_H_
#define CBMDIAR_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace cbmdiar {

// mt19937_64 with hand-rolled distributions so that streams are identical
// across standard library implementations. Every consumer that needs
// randomness takes an explicit Rng; nothing reads global state.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n).
  int64_t UniformInt(int64_t n) {
    return static_cast<int64_t>(Uniform() * static_cast<double>(n));
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via Box-Muller (one value per call; no caching so the
  // stream position is easy to reason about).
  double Gaussian() {
    double u1 = Uniform();
    double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Derives an independent stream for (seed, stream ids); splitmix-style mix.
  static uint64_t Derive(uint64_t seed, uint64_t a, uint64_t b = 0) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) +
                 0xbf58476d1ce4e5b9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cbmdiar

#endif  // CBMDIAR_RNG_H_

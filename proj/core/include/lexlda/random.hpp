#pragma once

#include <cstdint>
#include <random>

namespace lexlda {

// Seeded generator used by every stochastic component.
//
// Seed -> stream mapping (stable): the 64-bit user seed is passed through one
// SplitMix64 step and the result seeds std::mt19937_64, whose output sequence
// is fixed by the C++ standard. Uniform doubles take the top 53 bits of one
// engine draw; bounded integers use a 128-bit multiply-shift of one draw.
// Independent streams (e.g. parallel chains) use derive_seed(seed, index).
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    __extension__ using Wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<Wide>(engine_()) * n) >> 64);
  }

  Engine& engine() { return engine_; }

  bool operator==(const Rng&) const = default;

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
  }

 private:
  Engine engine_;
};

}  // namespace lexlda

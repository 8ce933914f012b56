#pragma once

#include <cstdint>

namespace seqrule {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based random source: every draw is a pure function of
/// (seed, key triple), so results do not depend on evaluation order or on
/// how work is split across threads. Keys are conventionally
/// (tag, step, code); see rng tags below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  /// Independent stream, e.g. one per generated record.
  Rng fork(std::uint64_t stream) const {
    return Rng(mix64(seed_ ^ mix64(stream ^ 0x5851f42d4c957f2dULL)));
  }

  std::uint64_t bits(std::uint64_t k1, std::uint64_t k2 = 0,
                     std::uint64_t k3 = 0) const {
    return mix64(seed_ ^ mix64(k1 ^ mix64(k2 ^ mix64(k3))));
  }

  /// Uniform draw in [0, 1).
  double uniform(std::uint64_t k1, std::uint64_t k2 = 0,
                 std::uint64_t k3 = 0) const {
    return static_cast<double>(bits(k1, k2, k3) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p, std::uint64_t k1, std::uint64_t k2 = 0,
                 std::uint64_t k3 = 0) const {
    return uniform(k1, k2, k3) < p;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Key tags reserving disjoint draw streams within one record.
inline constexpr std::uint64_t kRngTagVisitSample = 1;  // model output sampling
inline constexpr std::uint64_t kRngTagConsequent = 2;   // rule consequent draws

}  // namespace seqrule

#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace helmholtz {

// Seedable, splittable random stream with a fully documented algorithm:
// std::mt19937_64 (Mersenne Twister, 64-bit) with uniform doubles formed from the
// top 53 bits. No std::*_distribution is used anywhere — their output sequences
// are implementation-defined, which would make runs irreproducible across
// standard libraries. Bit determinism is guaranteed within one implementation;
// across implementations reproduction is statistical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Uniform double in [0, 1): (x >> 11) * 2^-53.
  double uniform();

  // Returns +1.0 with probability p, else −1.0.
  double sign_draw(double p) { return uniform() < p ? 1.0 : -1.0; }

  // Raw 64-bit draw.
  std::uint64_t bits();

  // Independent stream derived from the construction seed (not the current
  // state) and the stream id via splitmix64 mixing. A pure function of
  // (seed, stream), so evaluation streams never perturb the training stream.
  Rng split(std::uint64_t stream) const;

  // Engine state as portable text; round-trips exactly.
  std::string state() const;
  void set_state(const std::string& text);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace helmholtz

#pragma once

#include <cstdint>

namespace qshift {

/// Stateless counter-based generator. Every draw is a pure function of
/// (seed, stream, counter words), so values never depend on evaluation order
/// or on how work is split between threads.
///
/// Bits come from a chain of splitmix64 finalizers over the key and counter.
/// Gaussians use the cosine branch of Box-Muller on two 53-bit uniforms drawn
/// from counters (a, b, 2c) and (a, b, 2c + 1).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;
  double gaussian(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream identifiers, so that generators sharing a seed stay independent.
enum class Stream : std::uint64_t {
  tie_break = 1,
  pixel_noise = 2,
  uniform_field = 3,
};

/// Tie-break noise added to each density estimate.
struct NoiseModel {
  std::uint64_t seed = 0;
  double sigma0 = 1e-5;

  double draw(int i, int j) const;
};

}  // namespace qshift

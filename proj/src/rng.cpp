#include "qshift/rng.hpp"

#include <cmath>
#include <numbers>

namespace qshift {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  std::uint64_t h = splitmix64(key_ ^ a);
  h = splitmix64(h ^ (b * 0xc2b2ae3d27d4eb4fULL));
  return splitmix64(h ^ (c * 0x165667b19e3779f9ULL));
}

double CounterRng::uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  return (static_cast<double>(bits(a, b, c) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  const double u1 = uniform(a, b, 2 * c);
  const double u2 = uniform(a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseModel::draw(int i, int j) const {
  if (sigma0 == 0.0) return 0.0;
  const CounterRng rng(seed, static_cast<std::uint64_t>(Stream::tie_break));
  return sigma0 * rng.gaussian(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), 0);
}

}  // namespace qshift

#include "tvpsv/rng.hpp"

#include <cmath>

namespace tvpsv {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  // top 53 bits, shifted half a step so 0 and 1 are unreachable
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  // Box-Muller, cosine branch only; keeps the draw count per call fixed
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace tvpsv

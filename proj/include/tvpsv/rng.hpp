#ifndef TVPSV_RNG_HPP
#define TVPSV_RNG_HPP

#include <cstdint>
#include <random>

namespace tvpsv {

// Seedable random stream. Two streams constructed from the same
// (seed, stream) pair produce bit-identical sequences on every platform;
// distinct stream ids give statistically independent streams, which is what
// parallel backtest origins use.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform draw on the open interval (0, 1).
  double uniform();

  // Standard normal draw.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace tvpsv

#endif

#pragma once

#include <array>
#include <cstdint>

namespace heavycoin {

/// Philox4x32-10 block function. Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by (seed, stream_id).
///
/// The seed is the Philox key and the stream id occupies the upper half of the
/// counter, so distinct stream ids never share a block. Replaying the same
/// (seed, stream_id) yields the same sequence on every platform; the
/// transcendental calls used by normal() and gamma() are the only place where
/// a different libm could change the last bit.
///
/// A RandomSource is a value. Copying it forks an identical replay.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    if (pos_ == 2) refill();
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal (Boost.Random's ziggurat sampler).
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);

  /// Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int pos_ = 2;
};

}  // namespace heavycoin

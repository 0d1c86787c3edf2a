#pragma once

#include <cstdint>
#include <initializer_list>

namespace abcsmc2 {

/// Purpose tags entering the stream key, so that draws made for different
/// roles at the same (t, m, n, i) coordinates never share a stream.
enum class StreamTag : std::uint64_t {
  prior = 1,
  init_state = 2,
  ancestor = 3,
  propagate = 4,
  emit = 5,
  rejuv_resample = 6,
  rejuv_propose = 7,
  rejuv_accept = 8,
  rejuv_filter = 9,
  dataset = 10,
  pilot = 11,
  test = 12,
};

/// Counter-keyed random stream. A stream is derived from a tuple of 64-bit
/// words (seed, timestep, particle indices, purpose tag); the key is hashed
/// through a splitmix64-style finalizer, so streams for distinct tuples are
/// statistically independent and results do not depend on scheduling order.
///
/// Value type, cheap to construct per draw site. Not a cryptographic RNG.
class RngStream {
 public:
  RngStream() : state_(0x853c49e6748fea9bULL) {}
  explicit RngStream(std::uint64_t raw_state) : state_(raw_state) {}

  /// Derive a stream from key words. Order matters.
  static RngStream keyed(std::initializer_list<std::uint64_t> words);

  /// Child stream: extends this stream's key with more words.
  RngStream child(std::initializer_list<std::uint64_t> words) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform01();

  /// Uniform on [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal draw (ziggurat).
  double normal();

  /// Exponential(1) draw.
  double exponential();

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t state_;
};

}  // namespace abcsmc2

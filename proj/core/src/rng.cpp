#include "abcsmc2/rng.hpp"

#include <cmath>

namespace abcsmc2 {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// 256-layer ziggurat tables for the standard normal, built once at startup.
struct ZigguratTables {
  double x[257];
  double f[257];

  ZigguratTables() {
    const double r = 3.6541528853610088;
    const double v = 4.92867323399e-3;  // layer area for 256 layers
    x[1] = r;
    x[0] = v * std::exp(0.5 * r * r);  // pseudo-edge of the base strip
    f[0] = std::exp(-0.5 * x[0] * x[0]);
    f[1] = std::exp(-0.5 * r * r);
    for (int i = 2; i <= 255; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + f[i - 1]));
      f[i] = std::exp(-0.5 * x[i] * x[i]);
    }
    x[256] = 0.0;
    f[256] = 1.0;
  }
};

const ZigguratTables zig;

}  // namespace

RngStream RngStream::keyed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t w : words) h = mix64(h ^ (w + kGolden + (h << 6) + (h >> 2)));
  return RngStream(h);
}

RngStream RngStream::child(std::initializer_list<std::uint64_t> words) const {
  std::uint64_t h = mix64(state_ ^ 0x452821e638d01377ULL);
  for (std::uint64_t w : words) h = mix64(h ^ (w + kGolden + (h << 6) + (h >> 2)));
  return RngStream(h);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform01() {
  // 53 random bits, offset by half an ulp: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  // Rejection to remove modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t u;
  do {
    u = next_u64();
  } while (u >= limit);
  return u % n;
}

double RngStream::normal() {
  const double r = 3.6541528853610088;
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int idx = static_cast<int>(bits & 0xff);
    const double sign = (bits & 0x100) ? -1.0 : 1.0;
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    const double x = u * zig.x[idx];
    if (x < zig.x[idx + 1]) return sign * x;
    if (idx == 0) {
      // Tail beyond r (Marsaglia's method).
      double xv, yv;
      do {
        xv = -std::log(uniform01()) / r;
        yv = -std::log(uniform01());
      } while (yv + yv < xv * xv);
      return sign * (r + xv);
    }
    const double fx = std::exp(-0.5 * x * x);
    if (zig.f[idx] + uniform01() * (zig.f[idx + 1] - zig.f[idx]) < fx) {
      return sign * x;
    }
  }
}

double RngStream::exponential() { return -std::log(uniform01()); }

}  // namespace abcsmc2

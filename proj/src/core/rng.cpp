#include "core/rng.hpp"

#include <cmath>

namespace rmtlab {

void RngStream::refill() noexcept {
  // Several independent blocks per refill so the rounds interleave.
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  for (int b = 0; b < kBlocks; ++b) {
    std::uint64_t blk = block_ + static_cast<std::uint64_t>(b);
    auto out = philox4x32({static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32),
                           static_cast<std::uint32_t>(stream_id_),
                           static_cast<std::uint32_t>(stream_id_ >> 32)},
                          key);
    buf_[2 * b] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buf_[2 * b + 1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  }
  block_ += kBlocks;
  buf_pos_ = 0;
}

namespace {

// Marsaglia-Tsang ziggurat with 256 layers. Layer 0 is the base strip plus tail.
struct Ziggurat {
  static constexpr double r = 3.6541528853610088;
  static constexpr double v = 0.00492867323399;
  double x[257];
  double f[257];

  Ziggurat() {
    auto pdf = [](double t) { return std::exp(-0.5 * t * t); };
    x[0] = v / pdf(r);
    x[1] = r;
    for (int i = 1; i < 255; ++i) x[i + 1] = std::sqrt(-2.0 * std::log(v / x[i] + pdf(x[i])));
    x[256] = 0.0;
    for (int i = 0; i <= 256; ++i) f[i] = pdf(x[i]);
  }
};

const Ziggurat& zig() {
  static const Ziggurat z;
  return z;
}

}  // namespace

double RngStream::normal() noexcept {
  const Ziggurat& z = zig();
  for (;;) {
    std::uint64_t bits = next_u64();
    int layer = static_cast<int>(bits & 0xff);
    double sign = (bits & 0x100) ? -1.0 : 1.0;
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    double xv = u * z.x[layer];
    if (xv < z.x[layer + 1]) return sign * xv;
    if (layer == 0) {
      // tail beyond r
      double a, b;
      do {
        a = -std::log(uniform()) / Ziggurat::r;
        b = -std::log(uniform());
      } while (2.0 * b < a * a);
      return sign * (Ziggurat::r + a);
    }
    double y = z.f[layer] + uniform() * (z.f[layer + 1] - z.f[layer]);
    if (y < std::exp(-0.5 * xv * xv)) return sign * xv;
  }
}

}  // namespace rmtlab

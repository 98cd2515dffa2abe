#pragma once

#include <array>
#include <cstdint>

namespace rmtlab {

/// Philox4x32-10 counter-based block function (Salmon et al. 2011).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = std::uint64_t{0xD2511F53} * ctr[0];
    std::uint64_t p1 = std::uint64_t{0xCD9E8D57} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += 0x9E3779B9;
    key[1] += 0xBB67AE85;
  }
  return ctr;
}

/// SplitMix64 finalizer; used to fold (stream, tag) pairs into child stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
/*!
 * Reproducible random stream keyed by (seed, stream_id).
 *
 * The seed is the Philox key; the stream id occupies the upper half of the
 * counter and the lower half counts blocks. Two streams with distinct ids never
 * share a counter value, so they are independent for any practical draw count
 * (2^64 blocks per stream).
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent child stream: same seed, stream id folded with the tag.
  RngStream child(std::uint64_t tag) const noexcept {
    return RngStream(seed_, mix64(stream_id_ ^ mix64(tag + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t next_u64() noexcept {
    if (buf_pos_ == kBuf) refill();
    return buf_[buf_pos_++];
  }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard normal by the 256-layer ziggurat.
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  static constexpr int kBlocks = 4;
  static constexpr int kBuf = 2 * kBlocks;
  std::array<std::uint64_t, kBuf> buf_{};
  int buf_pos_ = kBuf;
};

}  // namespace rmtlab

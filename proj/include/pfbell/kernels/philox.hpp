#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace pfbell::rng {

struct Block {
  std::array<std::uint64_t, 4> w;
};

// Philox4x64-10 keyed counter permutation. Counter-addressed generation is
// what makes every estimate independent of worker count and block order.
inline Block philox4x64(const std::array<std::uint64_t, 4>& ctr,
                        const std::array<std::uint64_t, 2>& key) {
  constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;
  std::uint64_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    auto p0 = static_cast<unsigned __int128>(kMul0) * c0;
    auto p1 = static_cast<unsigned __int128>(kMul1) * c2;
    std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
    std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
    std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
    std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
  }
  return {{c0, c1, c2, c3}};
}

// A named substream of the generator. All randomness in the project is
// addressed as (seed, domain, substream, block index); no draw depends on
// any other draw.
struct Stream {
  std::uint64_t seed = 0;
  std::uint64_t domain = 0;
  std::uint64_t substream = 0;

  Block block(std::uint64_t index) const {
    return philox4x64({index, domain, substream, 0},
                      {seed, 0x243F6A8885A308D3ull});
  }
};

// 64-bit word -> uniform double in (0,1) with 52-bit granularity. Written
// with the exact operation sequence the SIMD kernels use.
inline double u01(std::uint64_t w) {
  std::uint64_t top = w >> 12;
  double d = std::bit_cast<double>(top | 0x4330000000000000ull) -
             0x1p52;  // exact integer value of top
  return (d + 0.5) * 0x1p-52;
}

// Sequential word consumer on top of a Stream, for single-draw interfaces.
class CountingRng {
public:
  explicit CountingRng(Stream s) : stream_(s) {}

  double next_u01() {
    std::uint64_t word = word_index_++;
    if (word / 4 != cached_block_) {
      cached_block_ = word / 4;
      block_ = stream_.block(cached_block_);
    }
    return u01(block_.w[word % 4]);
  }

private:
  Stream stream_;
  std::uint64_t word_index_ = 0;
  std::uint64_t cached_block_ = ~0ull;
  Block block_{};
};

}  // namespace pfbell::rng

#include "lampwalk/rng.hpp"

namespace lampwalk {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::uint32_t key0,
                                           std::uint32_t key1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::array<std::uint32_t, 4> n{
        static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ key0,
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ key1,
        static_cast<std::uint32_t>(p0),
    };
    c = n;
    key0 += kWeyl0;
    key1 += kWeyl1;
  }
  return c;
}

RandomStream::RandomStream(std::uint64_t master_seed,
                           std::uint64_t stream_index)
    : master_(master_seed), stream_(stream_index) {}

void RandomStream::refill() {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(counter_),
      static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32),
  };
  buf_ = philox4x32_10(ctr, static_cast<std::uint32_t>(master_),
                       static_cast<std::uint32_t>(master_ >> 32));
  ++counter_;
  pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (pos_ == 4) refill();
  return buf_[pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace lampwalk

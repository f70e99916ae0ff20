#pragma once

#include <array>
#include <cstdint>

namespace lampwalk {

// Counter-based pseudo-random generator (Philox-4x32, 10 rounds) so that
// every draw is a pure function of (master seed, stream index, position).
// Streams keyed by trajectory index are independent and individually
// reproducible, and results are identical across platforms and across any
// parallel scheduling of trajectories.
//
// Round constants (multipliers 0xD2511F53, 0xCD9E8D57; key increments
// 0x9E3779B9, 0xBB67AE85) follow the published Philox-4x32-10 parameters.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::uint32_t key0,
                                           std::uint32_t key1);

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint32_t next_u32();
  // Low word first, then high word — pinned so the byte stream is part of
  // the reproducibility contract.
  std::uint64_t next_u64();
  // Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_index() const { return stream_; }

 private:
  void refill();

  std::uint64_t master_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  unsigned pos_ = 4;
};

}  // namespace lampwalk

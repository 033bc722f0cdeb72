#pragma once

#include <array>
#include <cstdint>

namespace exlab::noise {

// Philox4x32-10 block: one bijective keyed round function per 128-bit counter.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// One Monte Carlo stream. The key is the base seed and the upper half of the
// counter is the stream index, so (base_seed, stream_index) fixes the whole
// sequence with no dependence on how many other streams were consumed.
//
// Gaussians use the inverse CDF, z = -sqrt(2) erfc^{-1}(2u), with u in (0,1)
// built from the top 53 bits of one 64-bit draw. Acceptance fixtures pin
// seeds against this exact mapping.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index) noexcept;

  std::uint64_t base_seed() const noexcept { return base_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1).
  double next_uniform() noexcept;
  double next_gaussian() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace exlab::noise

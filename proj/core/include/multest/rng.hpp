#ifndef MULTEST_RNG_HPP
#define MULTEST_RNG_HPP

#include <array>
#include <cstdint>

namespace multest {

/// Counter-based random stream (Philox 4x32-10). A stream is addressed by
/// (seed, stream id); draws within a stream walk a 64-bit block counter.
/// Streams are stateless to construct, so replicate r of a simulation can be
/// generated independently of every other replicate, in any order, on any
/// thread, with bit-identical results.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0,1).
  double next_uniform();

  /// Standard normal draw (Box-Muller over two uniforms, pair-cached).
  double next_normal();

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint32_t key_[2];
  std::uint32_t stream_[2];
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace multest

#endif  // MULTEST_RNG_HPP

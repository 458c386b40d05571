#ifndef MEDTEST_RNG_HPP
#define MEDTEST_RNG_HPP

#include <cstdint>

namespace medtest::dist {

// Deterministic, stream-splittable generator: xoshiro256++ whose state is
// derived from (seed, stream_id) through splitmix64. A given pair always
// reproduces the same sequence, and distinct stream_ids give statistically
// independent streams, so replication r of a simulation can own stream r
// regardless of how replications are scheduled across threads.
//
// Uniform doubles are produced from the top 53 bits of the raw output and
// normal variates through the inverse CDF, which keeps every draw a pure
// function of the stream state (no rejection, no hidden state), and hence
// bit-reproducible across platforms and thread counts.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double next_unit();

  // Standard normal via inverse-CDF transform of next_unit().
  double next_normal();

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_, stream_id_;
};

}  // namespace medtest::dist

#endif  // MEDTEST_RNG_HPP

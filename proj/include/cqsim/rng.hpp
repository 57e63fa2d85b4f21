#pragma once

#include <array>
#include <cstdint>

namespace cqsim {

// Counter-based random source (Philox 4x32, 10 rounds).  Each draw is a
// pure function of (seed, stream, counter), so an ensemble can hand every
// trajectory its own stream and every step its own counter and the numbers
// come out identical no matter how the work is scheduled across threads.
// The generator matches the published Philox test vectors, which the test
// suite pins; any reordering or rounding change is a bug, not a refresh.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  // Raw 128-bit block for the given counter.  Word layout fed to the
  // cipher: (counter lo, counter hi, stream lo, stream hi) keyed by
  // (seed lo, seed hi).
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  // One standard normal via Box-Muller on the block: 53-bit uniforms
  // u1 in (0, 1] (so the log is finite) and u2 in [0, 1).
  double normal(std::uint64_t counter) const;

 private:
  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
};

}  // namespace cqsim

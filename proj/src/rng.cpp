#include "cqsim/rng.hpp"

#include <cmath>

namespace cqsim {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kBump0 = 0x9E3779B9u;  // golden-ratio key schedule
constexpr std::uint32_t kBump1 = 0xBB67AE85u;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key0_(static_cast<std::uint32_t>(seed)),
      key1_(static_cast<std::uint32_t>(seed >> 32)),
      stream_lo_(static_cast<std::uint32_t>(stream)),
      stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t counter) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(counter);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter >> 32);
    std::uint32_t c2 = stream_lo_;
    std::uint32_t c3 = stream_hi_;
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t m0 = static_cast<std::uint64_t>(kMul0) * c0;
        const std::uint64_t m1 = static_cast<std::uint64_t>(kMul1) * c2;
        const std::uint32_t lo0 = static_cast<std::uint32_t>(m0);
        const std::uint32_t hi0 = static_cast<std::uint32_t>(m0 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(m1);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(m1 >> 32);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kBump0;
        k1 += kBump1;
    }
    return {c0, c1, c2, c3};
}

double CounterRng::normal(std::uint64_t counter) const {
    const std::array<std::uint32_t, 4> b = block(counter);
    const std::uint64_t x = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t y = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    const double u1 = static_cast<double>((x >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(y >> 11) * 0x1.0p-53;       // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace cqsim

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cquartet {

// Seeded random stream. A stream is identified by (seed, stream, substream):
// the same triple always yields the same sequence, independent of which
// other streams were drawn before it. Variates are computed from raw engine
// bits so results do not depend on the standard library's distributions.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Uniform integer on [0, bound). bound must be positive.
    std::size_t index(std::size_t bound);

    // Standard normal (Marsaglia polar method).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream identifiers used across modules. Kept in one place so no two
// call sites share a stream by accident.
namespace streams {
inline constexpr std::uint64_t low_variation = 1;
inline constexpr std::uint64_t high_variation = 2;
inline constexpr std::uint64_t occasional_placement = 3;
inline constexpr std::uint64_t occasional_jitter = 4;
inline constexpr std::uint64_t control_noise = 5;
inline constexpr std::uint64_t morph = 6;
inline constexpr std::uint64_t trial = 7;
}  // namespace streams

}  // namespace cquartet

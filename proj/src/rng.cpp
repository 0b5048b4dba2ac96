#include "cquartet/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cquartet {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
{
    // std::seed_seq is fully specified by the standard, so the engine state
    // is portable for a given key.
    std::seed_seq seq{lo32(seed),   hi32(seed),      lo32(stream),
                      hi32(stream), lo32(substream), hi32(substream)};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
    : engine_(make_engine(seed, stream, substream))
{
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::index: bound must be positive");
    const std::uint64_t n = bound;
    // Rejection keeps the draw unbiased for bounds that do not divide 2^64.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r = engine_();
    while (r >= limit)
        r = engine_();
    return static_cast<std::size_t>(r % n);
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace cquartet

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "hitforge/bits.hpp"
#include "hitforge/rational.hpp"

namespace hitforge {

/// Explicitly seeded randomness. All draws are derived from the raw
/// mt19937_64 output so results do not depend on the standard library's
/// distribution implementations.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    bool bit() {
        if (spare_bits_ == 0) {
            spare_ = engine_();
            spare_bits_ = 64;
        }
        bool b = spare_ & 1U;
        spare_ >>= 1;
        --spare_bits_;
        return b;
    }

    BitString bits(std::size_t n) {
        BitString out = BitString::filled(n, false);
        for (std::size_t i = 0; i < n; ++i) out.set(i, bit());
        return out;
    }

    /// Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);

    /// True with probability exactly p, for p in [0,1].
    bool bernoulli(const Rational& p);

    /// An independent source for a sub-task, derived from this one.
    RandomSource split() { return RandomSource(engine_()); }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t spare_ = 0;
    unsigned spare_bits_ = 0;
};

}  // namespace hitforge

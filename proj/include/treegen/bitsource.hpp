#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace treegen {

/// A probability of the form numerator / 2^exponent, with numerator <= 2^exponent.
struct DyadicProbability {
    std::uint64_t numerator = 0;
    unsigned exponent = 0;

    DyadicProbability() = default;
    DyadicProbability(std::uint64_t num, unsigned exp) : numerator(num), exponent(exp) {
        if (exp > 63)
            throw std::invalid_argument("DyadicProbability: exponent must be <= 63");
        if (num > (std::uint64_t{1} << exp))
            throw std::invalid_argument("DyadicProbability: numerator exceeds 2^exponent");
    }

    // Strip trailing zero bits so the comparison loop below stops as early as possible.
    DyadicProbability normalized() const {
        DyadicProbability p = *this;
        while (p.exponent > 0 && (p.numerator & 1) == 0) {
            p.numerator >>= 1;
            --p.exponent;
        }
        return p;
    }

    bool operator==(const DyadicProbability&) const = default;
};

// Stream of fair random bits from a seeded deterministic generator, with an
// exact count of every bit handed out. The generator is splitmix64; each
// 64-bit output word is consumed most-significant bit first. Both choices are
// frozen: identical seeds give identical bit streams on every platform, and
// the test suites pin seeds.
class MeteredBitSource {
public:
    explicit MeteredBitSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t bits_consumed() const { return bits_consumed_; }

    int next_bit() {
        if (word_bits_left_ == 0) {
            word_ = next_word();
            word_bits_left_ = 64;
        }
        const int b = static_cast<int>(word_ >> 63);
        word_ <<= 1;
        --word_bits_left_;
        ++bits_consumed_;
        return b;
    }

    /// Uniform over [0, 2^k), consuming exactly k bits (first bit drawn is the MSB).
    std::uint64_t uniform_pow2(unsigned k) {
        assert(k <= 64);
        std::uint64_t x = 0;
        for (unsigned i = 0; i < k; ++i)
            x = (x << 1) | static_cast<std::uint64_t>(next_bit());
        return x;
    }

    /// Exactly uniform over [0, m). Draws ceil(log2 m) bits and rejects values >= m,
    /// so the expected cost is at most 2*ceil(log2 m) bits.
    std::uint64_t uniform(std::uint64_t m) {
        if (m == 0)
            throw std::invalid_argument("uniform: m must be positive");
        const unsigned k = static_cast<unsigned>(std::bit_width(m - 1));
        for (;;) {
            const std::uint64_t x = uniform_pow2(k);
            if (x < m)
                return x;
        }
    }

    /// Uniform over {0,1,2}: two bits 00->0, 01->1, 10->2, 11->redraw.
    unsigned trit() { return static_cast<unsigned>(uniform(3)); }

    // True with probability exactly p. Compares drawn bits against the binary
    // expansion of p most-significant bit first and stops at the first decided
    // position, so at most p.exponent bits are spent (fewer after normalization).
    bool bernoulli(DyadicProbability p) {
        p = p.normalized();
        if (p.numerator == 0)
            return false;
        if (p.exponent == 0)
            return true;  // p == 1
        for (unsigned i = p.exponent; i-- > 0;) {
            const int p_bit = static_cast<int>((p.numerator >> i) & 1);
            const int u_bit = next_bit();
            if (u_bit != p_bit)
                return u_bit < p_bit;
        }
        return false;  // drawn prefix equals p exactly, so U >= p
    }

private:
    std::uint64_t next_word() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
    std::uint64_t word_ = 0;
    unsigned word_bits_left_ = 0;
    std::uint64_t bits_consumed_ = 0;
};

// Draws index i with probability masses[i] / 2^exponent by refining the dyadic
// interval of an implicit uniform draw one bit at a time: stop as soon as all
// completions of the drawn prefix land in the same category. Consumes at most
// `exponent` bits and the outcome law is exact.
inline unsigned categorical(MeteredBitSource& src, std::span<const std::uint64_t> masses,
                            unsigned exponent) {
    if (exponent > 63)
        throw std::invalid_argument("categorical: exponent must be <= 63");
    const std::uint64_t total = std::uint64_t{1} << exponent;
    std::uint64_t sum = 0;
    for (const auto m : masses)
        sum += m;
    if (sum != total)
        throw std::invalid_argument("categorical: masses must sum to 2^exponent");

    std::uint64_t prefix = 0;
    for (unsigned t = 0;; ++t) {
        const std::uint64_t width = total >> t;
        const std::uint64_t lo = prefix * width;
        const std::uint64_t hi = lo + width;
        std::uint64_t cum = 0;
        for (unsigned j = 0; j < masses.size(); ++j) {
            const std::uint64_t next = cum + masses[j];
            if (lo >= cum && hi <= next)
                return j;
            cum = next;
        }
        assert(t < exponent);
        prefix = (prefix << 1) | static_cast<std::uint64_t>(src.next_bit());
    }
}

// Per-sample seed for batch runs: mixes the run seed with the sample index so
// samples are independent and order-insensitive. Fixed function, documented in
// the README; changing it would change all pinned outputs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (index + 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace treegen

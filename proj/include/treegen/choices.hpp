#pragma once

#include "treegen/bitsource.hpp"

#include <concepts>
#include <cstdint>
#include <span>

namespace treegen {

// The samplers draw through this interface instead of raw bits, so a test
// driver can enumerate every possible run with exact probabilities while the
// production path maps each draw onto metered fair bits.
template <typename S>
concept ChoiceSource = requires(S& s, std::span<const std::uint64_t> masses, unsigned e,
                                std::uint64_t m) {
    { s.coin() } -> std::same_as<int>;                       // fair bit
    { s.quad() } -> std::same_as<unsigned>;                  // uniform over 4
    { s.trit() } -> std::same_as<unsigned>;                  // uniform over 3
    { s.uniform_node(m) } -> std::same_as<std::uint64_t>;    // uniform over [0, m)
    { s.categorical(masses, e) } -> std::same_as<unsigned>;  // masses[i] / 2^e
};

/// Production choice source: every draw decomposes into fair bits from one
/// MeteredBitSource, so the consumed-bit counter covers all randomness.
class BitChoices {
public:
    explicit BitChoices(MeteredBitSource& src) : src_(&src) {}

    int coin() { return src_->next_bit(); }
    unsigned quad() { return static_cast<unsigned>(src_->uniform_pow2(2)); }
    unsigned trit() { return src_->trit(); }
    std::uint64_t uniform_node(std::uint64_t m) { return src_->uniform(m); }
    unsigned categorical(std::span<const std::uint64_t> masses, unsigned exponent) {
        return treegen::categorical(*src_, masses, exponent);
    }

    MeteredBitSource& source() { return *src_; }

private:
    MeteredBitSource* src_;
};

static_assert(ChoiceSource<BitChoices>);

}  // namespace treegen

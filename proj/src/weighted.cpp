#include "treegen/weighted.hpp"

#include <charconv>

namespace treegen {

UnaryWeight parse_unary_weight(std::string_view text) {
    const auto parse_u64 = [](std::string_view s, const char* what) {
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument(std::string("weight: bad ") + what + " in \"" +
                                        std::string(s) + "\"");
        return value;
    };

    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        const std::uint64_t a = parse_u64(text, "integer");
        if (a == 0)
            throw std::invalid_argument("weight: must be positive");
        return {a, 0};
    }
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (den.size() < 3 || den.substr(0, 2) != "2^")
        throw std::invalid_argument("weight: denominator must be written 2^k");
    const std::uint64_t a = parse_u64(num, "numerator");
    const std::uint64_t k = parse_u64(den.substr(2), "exponent");
    if (a == 0)
        throw std::invalid_argument("weight: must be positive");
    if (k > 32)
        throw std::invalid_argument("weight: exponent must be <= 32");
    return {a, static_cast<unsigned>(k)};
}

BranchPlan make_branch_plan(UnaryWeight u, unsigned precision) {
    if (u.numerator == 0)
        throw std::invalid_argument("make_branch_plan: weight must be positive");
    if (precision == 0 || precision > 30)
        throw std::invalid_argument("make_branch_plan: precision must be in [1, 30]");
    if (u.exponent + precision > 62)
        throw std::invalid_argument("make_branch_plan: weight exponent too large");

    const unsigned total_exp = std::max(u.exponent + precision, 2 * precision);
    using u128 = unsigned __int128;
    const u128 one = u128{1} << total_exp;

    // 2uc + 4c^2 <= 1 over the common denominator 2^total_exp; monotone in the
    // numerator of c, so binary search for the largest admissible value.
    const auto admissible = [&](std::uint64_t x) {
        const u128 uc = (u128{u.numerator} * x) << (total_exp - u.exponent - precision);
        const u128 cc = (u128{x} * x) << (total_exp - 2 * precision);
        return 2 * uc <= one && 4 * cc <= one - 2 * uc;
    };
    std::uint64_t lo = 1, hi = std::uint64_t{1} << precision;
    if (!admissible(lo))
        throw std::invalid_argument(
            "make_branch_plan: weight too large for this precision, no positive step factor");
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (admissible(mid))
            lo = mid;
        else
            hi = mid - 1;
    }

    BranchPlan plan;
    plan.weight = u;
    plan.c_numerator = lo;
    plan.c_exponent = precision;
    plan.mass_exponent = total_exp;
    const std::uint64_t mass_unary = static_cast<std::uint64_t>(
        (u128{u.numerator} * lo) << (total_exp - u.exponent - precision));
    const std::uint64_t mass_binary =
        static_cast<std::uint64_t>((u128{lo} * lo) << (total_exp - 2 * precision));
    // Order: leaf-unary, green, H4..H7, abort.
    plan.masses = {mass_unary, mass_unary, mass_binary, mass_binary,
                   mass_binary, mass_binary, 0};
    plan.masses[BranchPlan::kAbort] =
        (std::uint64_t{1} << total_exp) - 2 * mass_unary - 4 * mass_binary;

    // Shrink the common denominator while every mass stays integral.
    bool all_even = true;
    while (plan.mass_exponent > 0 && all_even) {
        for (const auto m : plan.masses)
            if (m & 1) {
                all_even = false;
                break;
            }
        if (all_even) {
            for (auto& m : plan.masses)
                m >>= 1;
            --plan.mass_exponent;
        }
    }
    return plan;
}

std::pair<TreeArena, SampleReport> sample_weighted(std::uint64_t n, UnaryWeight u,
                                                   MeteredBitSource& src,
                                                   WeightedOptions options) {
    if (n == 0)
        throw std::invalid_argument("sample_weighted: size must be >= 1");
    if (n > options.size_cap && !options.override_size_cap)
        throw std::invalid_argument(
            "sample_weighted: size exceeds the cap of " + std::to_string(options.size_cap) +
            " (expected rejection cost grows exponentially; override to proceed)");
    const BranchPlan plan = make_branch_plan(u, options.precision);
    BitChoices choices(src);

    SampleReport rep;
    const std::uint64_t bits_before = src.bits_consumed();
    const auto t0 = std::chrono::steady_clock::now();
    for (;;) {
        auto r = try_sample_weighted(n, plan, choices);
        if (r && r->size() == n) {
            rep.wall_time = std::chrono::steady_clock::now() - t0;
            rep.bits_consumed = src.bits_consumed() - bits_before;
            rep.size = n;
            return {std::move(*r), rep};
        }
        ++rep.restarts;
    }
}

}  // namespace treegen

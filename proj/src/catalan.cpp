#include "treegen/catalan.hpp"

namespace treegen {
namespace {

template <typename Run>
std::pair<TreeArena, SampleReport> timed(MeteredBitSource& src, Run&& run) {
    SampleReport rep;
    const std::uint64_t bits_before = src.bits_consumed();
    const auto t0 = std::chrono::steady_clock::now();
    TreeArena tree = run(rep);
    rep.wall_time = std::chrono::steady_clock::now() - t0;
    rep.bits_consumed = src.bits_consumed() - bits_before;
    rep.size = tree.size();
    return {std::move(tree), rep};
}

}  // namespace

std::pair<TreeArena, SampleReport> sample_binary_rejection(std::uint64_t n,
                                                           MeteredBitSource& src,
                                                           bool faithful) {
    BitChoices choices(src);
    return timed(src, [&](SampleReport& rep) {
        for (;;) {
            if (auto r = try_sample_binary(n, choices, faithful))
                return std::move(*r);
            ++rep.restarts;
        }
    });
}

std::pair<TreeArena, SampleReport> sample_binary_efficient(std::uint64_t n,
                                                           MeteredBitSource& src) {
    BitChoices choices(src);
    return timed(src, [&](SampleReport& rep) {
        return sample_binary_efficient_pointed(n, choices, &rep.repoint_fallbacks).first;
    });
}

std::pair<TreeArena, SampleReport> sample_binary_remy_classic(std::uint64_t n,
                                                              MeteredBitSource& src) {
    BitChoices choices(src);
    return timed(src, [&](SampleReport&) {
        return sample_binary_remy_classic_core(n, choices);
    });
}

}  // namespace treegen

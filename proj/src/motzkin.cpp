#include "treegen/motzkin.hpp"

namespace treegen {

std::pair<TreeArena, SampleReport> sample_motzkin(std::uint64_t n, MeteredBitSource& src) {
    BitChoices choices(src);
    SampleReport rep;
    const std::uint64_t bits_before = src.bits_consumed();
    const auto t0 = std::chrono::steady_clock::now();
    for (;;) {
        auto r = try_sample_motzkin(n, choices);
        if (r && r->size() == n) {
            rep.wall_time = std::chrono::steady_clock::now() - t0;
            rep.bits_consumed = src.bits_consumed() - bits_before;
            rep.size = n;
            return {std::move(*r), rep};
        }
        ++rep.restarts;  // failed try or overshoot to n+1
    }
}

}  // namespace treegen

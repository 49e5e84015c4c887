#pragma once

#include <chrono>
#include <cstdint>

namespace treegen {

/// Per-sample statistics returned by the top-level samplers.
struct SampleReport {
    std::uint64_t size = 0;            // nodes in the returned tree
    std::uint64_t bits_consumed = 0;   // exact source-counter delta
    std::uint64_t restarts = 0;        // failed tries before success
    std::uint64_t repoint_fallbacks = 0;  // uniform node redraws (efficient sampler)
    std::chrono::nanoseconds wall_time{0};
};

/// Instrumentation for the repointing cost bounds.
struct TryTrace {
    std::uint64_t upward_travel = 0;    // parent steps walked during repointing
    std::uint64_t size_increments = 0;  // nodes added by grafts
};

}  // namespace treegen

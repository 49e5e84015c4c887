#pragma once

#include "treegen/choices.hpp"
#include "treegen/pointing.hpp"
#include "treegen/report.hpp"

#include <optional>
#include <utility>

namespace treegen {

// The four binary graft cases: where the new leaf goes and which color it takes.
//   F1 right/red, F2 right/blue, F3 left/red, F4 left/blue
enum class FCase : std::uint8_t { F1, F2, F3, F4 };

/// Two-bit value (MSB first) to graft case: 00->F1, 01->F2, 10->F3, 11->F4.
inline FCase fcase_from_bits(unsigned two_bits) {
    assert(two_bits < 4);
    return static_cast<FCase>(two_bits);
}

/// Grows the tree at v: a new binary node takes v's place, the new leaf carries
/// the case's color. The previous point on v is forgotten.
inline ColorPoint graft_F(TreeArena& t, NodeRef v, FCase c) {
    const Side side = (c == FCase::F1 || c == FCase::F2) ? Side::Right : Side::Left;
    const Color color = (c == FCase::F1 || c == FCase::F3) ? Color::Red : Color::Blue;
    const auto [b, l] = t.insert_binary_above(v, side);
    return {color, l};
}

/// Undoes graft_F: removes the pointed leaf and its binary parent, returning the
/// sibling as the recovered plain point.
inline NodeRef graft_F_inverse(TreeArena& t, ColorPoint cp) {
    if (t.size() < 3)
        throw std::invalid_argument("graft_F_inverse: tree too small");
    if (cp.color == Color::Green)
        throw std::invalid_argument("graft_F_inverse: green points have no binary graft");
    check_point(t, cp);
    return t.delete_binary_leaf(cp.node);
}

// One try: starts from a pointed leaf (red by default; with `faithful` a coin
// picks blue or red, and blue-started runs fail at the first repoint), then n
// times repoints and grafts with a fresh two-bit case. Fails when the repoint
// bottoms out. On success the tree has 2n+1 nodes and the final point is
// returned alongside it.
template <ChoiceSource S>
std::optional<std::pair<TreeArena, ColorPoint>> try_sample_binary_pointed(
    std::uint64_t n, S& src, bool faithful = false, TryTrace* trace = nullptr) {
    TreeArena t = TreeArena::leaf();
    t.reserve(2 * n + 1);
    const Color start =
        faithful ? (src.coin() ? Color::Red : Color::Blue) : Color::Red;
    ColorPoint point{start, t.root()};
    for (std::uint64_t i = 0; i < n; ++i) {
        const PlainPoint v =
            repoint(t, point, trace ? &trace->upward_travel : nullptr);
        if (!v)
            return std::nullopt;
        point = graft_F(t, *v, fcase_from_bits(src.quad()));
        if (trace)
            trace->size_increments += 2;
    }
    return std::make_pair(std::move(t), point);
}

template <ChoiceSource S>
std::optional<TreeArena> try_sample_binary(std::uint64_t n, S& src, bool faithful = false,
                                           TryTrace* trace = nullptr) {
    auto r = try_sample_binary_pointed(n, src, faithful, trace);
    if (!r)
        return std::nullopt;
    return std::move(r->first);
}

// Never-failing variant: when the repoint bottoms out at step i, the plain
// point is redrawn uniformly over the 2i+1 nodes instead (the sampler never
// deletes, so arena indices 0..2i are exactly the live nodes).
template <ChoiceSource S>
std::pair<TreeArena, ColorPoint> sample_binary_efficient_pointed(
    std::uint64_t n, S& src, std::uint64_t* fallbacks = nullptr, TryTrace* trace = nullptr) {
    TreeArena t = TreeArena::leaf();
    t.reserve(2 * n + 1);
    ColorPoint point{Color::Red, t.root()};
    for (std::uint64_t i = 0; i < n; ++i) {
        PlainPoint v = repoint(t, point, trace ? &trace->upward_travel : nullptr);
        if (!v) {
            v = NodeRef(static_cast<std::uint32_t>(src.uniform_node(2 * i + 1)));
            if (fallbacks)
                ++*fallbacks;
        }
        point = graft_F(t, *v, fcase_from_bits(src.quad()));
        if (trace)
            trace->size_increments += 2;
    }
    return {std::move(t), point};
}

/// Classic growth baseline: each step grafts at a uniformly drawn node with a
/// one-bit side draw (0 -> left, 1 -> right); no points, no failures.
template <ChoiceSource S>
TreeArena sample_binary_remy_classic_core(std::uint64_t n, S& src) {
    TreeArena t = TreeArena::leaf();
    t.reserve(2 * n + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        const NodeRef v(static_cast<std::uint32_t>(src.uniform_node(2 * i + 1)));
        t.insert_binary_above(v, src.coin() ? Side::Right : Side::Left);
    }
    return t;
}

// Top-level samplers over a metered bit source (catalan.cpp). All three return
// a uniform binary tree with 2n+1 nodes plus per-run statistics.
std::pair<TreeArena, SampleReport> sample_binary_rejection(std::uint64_t n,
                                                           MeteredBitSource& src,
                                                           bool faithful = false);
std::pair<TreeArena, SampleReport> sample_binary_efficient(std::uint64_t n,
                                                           MeteredBitSource& src);
std::pair<TreeArena, SampleReport> sample_binary_remy_classic(std::uint64_t n,
                                                              MeteredBitSource& src);

}  // namespace treegen

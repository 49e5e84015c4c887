#pragma once

#include "treegen/choices.hpp"
#include "treegen/pointing.hpp"
#include "treegen/report.hpp"

#include <optional>
#include <utility>
#include <variant>

namespace treegen {

// The five unary-binary graft cases. G1 and G2 add one node, G3/G4/G5 add two.
//   G3 right/blue, G4 left/red, G5 left/blue
enum class GCase : std::uint8_t { G1, G2, G3, G4, G5 };

// Size +1 step driven by the colored point itself: a red or blue leaf gets a
// new unary parent and keeps its color; a green unary node turns binary, its
// child staying on the left and a fresh red-pointed leaf on the right.
inline ColorPoint graft_G1(TreeArena& t, ColorPoint cp) {
    check_point(t, cp);
    if (cp.color == Color::Green)
        return {Color::Red, t.promote_unary(cp.node)};
    t.insert_unary_above(cp.node);
    return cp;
}

/// Size +1 step at a plain point: a new unary node takes v's place and becomes
/// the green point.
inline ColorPoint graft_G2(TreeArena& t, NodeRef v) {
    return {Color::Green, t.insert_unary_above(v)};
}

/// Size +2 step at a plain point: binary graft with leaf side and color by case.
inline ColorPoint graft_G345(TreeArena& t, NodeRef v, GCase c) {
    if (c == GCase::G1 || c == GCase::G2)
        throw std::invalid_argument("graft_G345: case must be G3, G4 or G5");
    const Side side = c == GCase::G3 ? Side::Right : Side::Left;
    const Color color = c == GCase::G4 ? Color::Red : Color::Blue;
    const auto [b, l] = t.insert_binary_above(v, side);
    return {color, l};
}

struct GInverse {
    GCase applied;
    std::variant<ColorPoint, NodeRef> restored;  // ColorPoint for G1, plain point otherwise
};

// Undoes exactly one graft step; the seven dispatch cases cover every colored
// point of a tree with at least two nodes.
inline GInverse graft_G_inverse(TreeArena& t, ColorPoint cp) {
    if (t.size() < 2)
        throw std::invalid_argument("graft_G_inverse: tree too small");
    check_point(t, cp);

    if (cp.color == Color::Green)
        return {GCase::G2, t.delete_unary(cp.node)};

    switch (t.child_kind(cp.node)) {
        case ChildKind::Only:
            t.delete_unary(t.parent(cp.node));
            return {GCase::G1, cp};  // color kept on the same leaf
        case ChildKind::Right:
            if (cp.color == Color::Red)
                return {GCase::G1, ColorPoint{Color::Green, t.demote_binary(cp.node)}};
            return {GCase::G3, t.delete_binary_leaf(cp.node)};
        case ChildKind::Left:
            if (cp.color == Color::Red)
                return {GCase::G4, t.delete_binary_leaf(cp.node)};
            return {GCase::G5, t.delete_binary_leaf(cp.node)};
    }
    throw std::logic_error("graft_G_inverse: unreachable");
}

// One try: starts from a coin-colored leaf and grows while the size is below n.
// Branch law per step: G1 and G2 with probability 1/3 each (first trit), G3, G4
// and G5 with 1/9 each (second trit). G1 acts on the colored point directly;
// the other cases repoint first and fail on bottom. A success has size n, or
// n+1 when the last step was a binary graft; the caller rejects the overshoot.
template <ChoiceSource S>
std::optional<std::pair<TreeArena, ColorPoint>> try_sample_motzkin_pointed(
    std::uint64_t n, S& src, TryTrace* trace = nullptr) {
    if (n < 1)
        throw std::invalid_argument("try_sample_motzkin: size must be >= 1");
    TreeArena t = TreeArena::leaf();
    t.reserve(n + 1);
    ColorPoint point{src.coin() ? Color::Red : Color::Blue, t.root()};
    while (t.size() < n) {
        const unsigned first = src.trit();
        if (first == 0) {
            point = graft_G1(t, point);
            if (trace)
                ++trace->size_increments;
            continue;
        }
        GCase c = GCase::G2;
        if (first == 2) {
            const unsigned second = src.trit();
            c = second == 0 ? GCase::G3 : second == 1 ? GCase::G4 : GCase::G5;
        }
        const PlainPoint v = repoint(t, point, trace ? &trace->upward_travel : nullptr);
        if (!v)
            return std::nullopt;
        point = c == GCase::G2 ? graft_G2(t, *v) : graft_G345(t, *v, c);
        if (trace)
            trace->size_increments += c == GCase::G2 ? 1 : 2;
    }
    return std::make_pair(std::move(t), point);
}

template <ChoiceSource S>
std::optional<TreeArena> try_sample_motzkin(std::uint64_t n, S& src,
                                            TryTrace* trace = nullptr) {
    auto r = try_sample_motzkin_pointed(n, src, trace);
    if (!r)
        return std::nullopt;
    return std::move(r->first);
}

/// Uniform unary-binary tree with exactly n nodes: retries tries that fail or
/// overshoot to n+1 (motzkin.cpp).
std::pair<TreeArena, SampleReport> sample_motzkin(std::uint64_t n, MeteredBitSource& src);

}  // namespace treegen

#pragma once

#include "treegen/arena.hpp"

#include <optional>
#include <string>

namespace treegen {

enum class Color : std::uint8_t { Blue, Red, Green };

/// A blue or red pointed leaf, or a green pointed unary node.
struct ColorPoint {
    Color color;
    NodeRef node;
    friend constexpr bool operator==(const ColorPoint&, const ColorPoint&) = default;
};

/// A pointed node, or nullopt for the bottom point.
using PlainPoint = std::optional<NodeRef>;

inline void check_point(const TreeArena& t, ColorPoint cp) {
    const Arity a = t.arity(cp.node);
    const bool ok = cp.color == Color::Green ? a == Arity::Unary : a == Arity::Leaf;
    if (!ok)
        throw std::invalid_argument("ColorPoint: color does not match node arity");
}

// Trades the colored point for a plain one without touching the tree:
//   blue leaf  -> first ancestor (leaf included) that is a left child, else bottom
//   red leaf   -> first ancestor (leaf included) that is a right child; the root
//                 counts as a right child, so this always exists
//   green unary-> its only child
// `travel` accumulates the number of upward steps walked, for the cost bounds
// checked in the tests.
inline PlainPoint repoint(const TreeArena& t, ColorPoint cp, std::uint64_t* travel = nullptr) {
    check_point(t, cp);
    if (cp.color == Color::Green)
        return t.only_child(cp.node);

    const ChildKind want = cp.color == Color::Blue ? ChildKind::Left : ChildKind::Right;
    NodeRef v = cp.node;
    for (;;) {
        if (t.child_kind(v) == want)
            return v;
        if (t.is_root(v))
            return std::nullopt;  // blue point with no left-child ancestor
        v = t.parent(v);
        if (travel)
            ++*travel;
    }
}

inline NodeRef leftmost_leaf(const TreeArena& t, NodeRef v) {
    while (t.arity(v) != Arity::Leaf)
        v = t.arity(v) == Arity::Unary ? t.only_child(v) : t.child(v, Side::Left);
    return v;
}

inline NodeRef rightmost_leaf(const TreeArena& t, NodeRef v) {
    while (t.arity(v) != Arity::Leaf)
        v = t.arity(v) == Arity::Unary ? t.only_child(v) : t.child(v, Side::Right);
    return v;
}

// Inverse of repoint: recovers the unique colored point whose repointing gives p.
inline ColorPoint repoint_inverse(const TreeArena& t, PlainPoint p) {
    if (!p)
        return {Color::Blue, rightmost_leaf(t, t.root())};
    switch (t.child_kind(*p)) {
        case ChildKind::Left: return {Color::Blue, rightmost_leaf(t, *p)};
        case ChildKind::Right: return {Color::Red, leftmost_leaf(t, *p)};
        case ChildKind::Only: return {Color::Green, t.parent(*p)};
    }
    throw std::logic_error("repoint_inverse: unreachable");
}

/// Debug form "blue@i" / "red@i" / "green@i", i being the preorder position.
inline std::string to_debug_string(const TreeArena& t, ColorPoint cp) {
    const char* name = cp.color == Color::Blue ? "blue" : cp.color == Color::Red ? "red" : "green";
    return std::string(name) + "@" + std::to_string(t.preorder_index(cp.node));
}

}  // namespace treegen

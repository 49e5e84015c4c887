#pragma once

#include "treegen/choices.hpp"
#include "treegen/motzkin.hpp"
#include "treegen/pointing.hpp"
#include "treegen/report.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>

namespace treegen {

/// Multiplicative weight u = numerator / 2^exponent carried by every unary
/// node; u may exceed 1. u = 1 recovers the uniform unary-binary case.
struct UnaryWeight {
    std::uint64_t numerator = 1;
    unsigned exponent = 0;
    friend constexpr bool operator==(const UnaryWeight&, const UnaryWeight&) = default;
};

/// Parses "a" or "a/2^k" (weighted.cpp).
UnaryWeight parse_unary_weight(std::string_view text);

// Per-step branch law for the weighted grower. With step factor c, the two
// size+1 branches carry mass u*c each, the four binary branches c^2 each, and
// an abort branch absorbs the dyadic slack so everything sums to one. Along a
// run, each added unary node contributes a factor u*c and each binary graft
// c^2, which makes the reach probability of a pointed tree with n nodes and k
// unary nodes exactly u^k * c^(n-1) / 2 regardless of path.
struct BranchPlan {
    UnaryWeight weight;
    std::uint64_t c_numerator = 0;
    unsigned c_exponent = 0;  // c = c_numerator / 2^c_exponent
    std::array<std::uint64_t, 7> masses{};
    unsigned mass_exponent = 0;

    // Branch indices inside `masses`.
    static constexpr unsigned kLeafUnary = 0;   // H1/H2 on the current colored leaf
    static constexpr unsigned kGreenCreate = 1; // H3 after repointing
    static constexpr unsigned kBinaryFirst = 2; // H4..H7 after repointing
    static constexpr unsigned kAbort = 6;
};

/// Largest dyadic c with denominator 2^precision such that 2uc + 4c^2 <= 1.
/// Throws if no positive c exists at that precision or u is zero.
BranchPlan make_branch_plan(UnaryWeight u, unsigned precision = 16);

// Weighted graft cases. H1/H2 act on the colored leaf itself; H3..H7 act on a
// plain point. Unlike the uniform unary-binary bijection, a red right leaf is
// produced by a direct binary graft (H7) rather than through a green point.
enum class HCase : std::uint8_t { H1, H2, H3, H4, H5, H6, H7 };

using HPoint = std::variant<ColorPoint, NodeRef>;

inline ColorPoint graft_H(TreeArena& t, const HPoint& point, HCase c) {
    if (c == HCase::H1 || c == HCase::H2) {
        const ColorPoint* cp = std::get_if<ColorPoint>(&point);
        if (!cp)
            throw std::invalid_argument("graft_H: H1/H2 need a colored leaf point");
        const Color want = c == HCase::H1 ? Color::Red : Color::Blue;
        if (cp->color != want)
            throw std::invalid_argument("graft_H: point color does not match case");
        check_point(t, *cp);
        t.insert_unary_above(cp->node);
        return *cp;
    }
    const NodeRef* v = std::get_if<NodeRef>(&point);
    if (!v)
        throw std::invalid_argument("graft_H: H3..H7 need a plain point");
    switch (c) {
        case HCase::H3:
            return graft_G2(t, *v);
        case HCase::H4:
            return {Color::Blue, t.insert_binary_above(*v, Side::Right).second};
        case HCase::H5:
            return {Color::Red, t.insert_binary_above(*v, Side::Left).second};
        case HCase::H6:
            return {Color::Blue, t.insert_binary_above(*v, Side::Left).second};
        case HCase::H7:
            return {Color::Red, t.insert_binary_above(*v, Side::Right).second};
        default:
            throw std::logic_error("graft_H: unreachable");
    }
}

struct HInverse {
    HCase applied;
    HPoint restored;
};

/// Undoes exactly one weighted graft; total over every colored point of a tree
/// with at least two nodes.
inline HInverse graft_H_inverse(TreeArena& t, ColorPoint cp) {
    if (t.size() < 2)
        throw std::invalid_argument("graft_H_inverse: tree too small");
    check_point(t, cp);

    if (cp.color == Color::Green)
        return {HCase::H3, t.delete_unary(cp.node)};

    const ChildKind kind = t.child_kind(cp.node);
    if (kind == ChildKind::Only) {
        t.delete_unary(t.parent(cp.node));
        return {cp.color == Color::Red ? HCase::H1 : HCase::H2, cp};
    }
    if (kind == ChildKind::Right) {
        const HCase c = cp.color == Color::Blue ? HCase::H4 : HCase::H7;
        return {c, t.delete_binary_leaf(cp.node)};
    }
    const HCase c = cp.color == Color::Red ? HCase::H5 : HCase::H6;
    return {c, t.delete_binary_leaf(cp.node)};
}

// One try of the weighted grower. The leaf-unary branch applies to the colored
// point directly and fails on a green point (the rewriting of the branch law
// excludes growing a unary above a green point); the other growth branches
// repoint first and fail on bottom; the abort branch always fails. Success
// means size n, or n+1 on a binary overshoot, rejected by the caller.
template <ChoiceSource S>
std::optional<std::pair<TreeArena, ColorPoint>> try_sample_weighted_pointed(
    std::uint64_t n, const BranchPlan& plan, S& src) {
    if (n < 1)
        throw std::invalid_argument("try_sample_weighted: size must be >= 1");
    TreeArena t = TreeArena::leaf();
    t.reserve(n + 1);
    ColorPoint point{src.coin() ? Color::Red : Color::Blue, t.root()};
    while (t.size() < n) {
        const unsigned branch = src.categorical(plan.masses, plan.mass_exponent);
        if (branch == BranchPlan::kAbort)
            return std::nullopt;
        if (branch == BranchPlan::kLeafUnary) {
            if (point.color == Color::Green)
                return std::nullopt;
            point = graft_H(t, point, point.color == Color::Red ? HCase::H1 : HCase::H2);
            continue;
        }
        const PlainPoint v = repoint(t, point);
        if (!v)
            return std::nullopt;
        if (branch == BranchPlan::kGreenCreate) {
            point = graft_H(t, *v, HCase::H3);
        } else {
            const HCase c = static_cast<HCase>(
                static_cast<unsigned>(HCase::H4) + (branch - BranchPlan::kBinaryFirst));
            point = graft_H(t, *v, c);
        }
    }
    return std::make_pair(std::move(t), point);
}

template <ChoiceSource S>
std::optional<TreeArena> try_sample_weighted(std::uint64_t n, const BranchPlan& plan,
                                             S& src) {
    auto r = try_sample_weighted_pointed(n, plan, src);
    if (!r)
        return std::nullopt;
    return std::move(r->first);
}

struct WeightedOptions {
    unsigned precision = 16;
    std::uint64_t size_cap = 64;     // rejection cost grows exponentially with size
    bool override_size_cap = false;  // explicit opt-in for larger sizes
};

/// Rejection sampler: conditioned on size n the output law is proportional to
/// u^(number of unary nodes) (weighted.cpp).
std::pair<TreeArena, SampleReport> sample_weighted(std::uint64_t n, UnaryWeight u,
                                                   MeteredBitSource& src,
                                                   WeightedOptions options = {});

}  // namespace treegen

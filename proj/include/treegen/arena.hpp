#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treegen {

enum class Arity : std::uint8_t { Leaf, Unary, Binary };
enum class ChildKind : std::uint8_t { Left, Right, Only };
enum class Side : std::uint8_t { Left, Right };

/// Index of a node inside a TreeArena.
class NodeRef {
public:
    constexpr NodeRef() = default;
    constexpr explicit NodeRef(std::uint32_t index) : index_(index) {}
    constexpr std::uint32_t index() const { return index_; }
    friend constexpr bool operator==(NodeRef, NodeRef) = default;

private:
    std::uint32_t index_ = 0xFFFFFFFFu;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

// Array-backed plane tree. Each node stores an arity flag, the parent index
// and two child indices; 16 bytes per node below 2^32 nodes. The graft
// primitives are O(1) and never move existing nodes, so indices stay stable
// while a sampler grows the tree. The prune primitives (used by the inverse
// bijections) mark slots dead instead of erasing them; serialization walks
// the live structure only.
class TreeArena {
public:
    static constexpr std::uint32_t npos = 0xFFFFFFFFu;
    static constexpr std::uint64_t max_nodes = 0xFFFFFFF0u;  // 32-bit indices

    /// Single-node tree consisting of one leaf.
    static TreeArena leaf() {
        TreeArena t;
        t.add_node(Arity::Leaf);
        t.root_ = NodeRef(0);
        return t;
    }

    std::uint64_t size() const { return live_; }
    std::uint32_t slot_count() const { return static_cast<std::uint32_t>(nodes_.size()); }
    std::uint64_t leaf_count() const { return leaves_; }
    std::uint64_t unary_count() const { return unaries_; }
    std::uint64_t binary_count() const { return binaries_; }
    NodeRef root() const { return root_; }
    bool is_root(NodeRef v) const { return v == root_; }
    bool is_dead(NodeRef v) const { return at(v).dead; }

    Arity arity(NodeRef v) const { return at(v).arity; }

    NodeRef parent(NodeRef v) const {
        const Node& n = at(v);
        assert(n.parent != npos);
        return NodeRef(n.parent);
    }

    /// The root counts as a right child.
    ChildKind child_kind(NodeRef v) const {
        const Node& n = at(v);
        if (n.parent == npos)
            return ChildKind::Right;
        const Node& p = at(NodeRef(n.parent));
        if (p.arity == Arity::Unary)
            return ChildKind::Only;
        return p.child[0] == v.index() ? ChildKind::Left : ChildKind::Right;
    }

    NodeRef child(NodeRef v, Side s) const {
        const Node& n = at(v);
        assert(n.arity == Arity::Binary);
        return NodeRef(n.child[s == Side::Left ? 0 : 1]);
    }

    NodeRef only_child(NodeRef v) const {
        const Node& n = at(v);
        assert(n.arity == Arity::Unary);
        return NodeRef(n.child[0]);
    }

    void reserve(std::uint64_t n) {
        if (n > max_nodes)
            throw std::length_error("TreeArena: node count exceeds 32-bit index space");
        nodes_.reserve(n);
    }
    std::uint64_t memory_bytes() const { return nodes_.capacity() * sizeof(Node); }

    // --- graft primitives ---

    /// New unary node u takes v's place; v becomes u's only child. Returns u.
    NodeRef insert_unary_above(NodeRef v) {
        const NodeRef u = add_node(Arity::Unary);
        splice_above(v, u);
        at(u).child[0] = v.index();
        at(v).parent = u.index();
        return u;
    }

    /// New binary node b takes v's place with a fresh leaf on leaf_side and v on
    /// the other side. Returns (b, leaf).
    std::pair<NodeRef, NodeRef> insert_binary_above(NodeRef v, Side leaf_side) {
        const NodeRef b = add_node(Arity::Binary);
        const NodeRef l = add_node(Arity::Leaf);
        splice_above(v, b);
        const unsigned leaf_slot = leaf_side == Side::Left ? 0 : 1;
        at(b).child[leaf_slot] = l.index();
        at(b).child[1 - leaf_slot] = v.index();
        at(v).parent = b.index();
        at(l).parent = b.index();
        return {b, l};
    }

    // --- prune primitives (exact inverses of the grafts) ---

    /// Removes unary node u; its only child takes u's place. Returns the child.
    NodeRef delete_unary(NodeRef u) {
        if (at(u).arity != Arity::Unary)
            throw std::invalid_argument("delete_unary: node is not unary");
        const NodeRef c = NodeRef(at(u).child[0]);
        splice_out(u, c);
        kill(u);
        return c;
    }

    /// Removes leaf l and its binary parent b; the sibling takes b's place.
    /// Returns the sibling.
    NodeRef delete_binary_leaf(NodeRef l) {
        if (at(l).arity != Arity::Leaf)
            throw std::invalid_argument("delete_binary_leaf: node is not a leaf");
        if (at(l).parent == npos)
            throw std::invalid_argument("delete_binary_leaf: leaf is the root");
        const NodeRef b = NodeRef(at(l).parent);
        if (at(b).arity != Arity::Binary)
            throw std::invalid_argument("delete_binary_leaf: parent is not binary");
        const NodeRef s =
            NodeRef(at(b).child[0] == l.index() ? at(b).child[1] : at(b).child[0]);
        splice_out(b, s);
        kill(l);
        kill(b);
        return s;
    }

    // --- arity flips (unary <-> binary in place, used by the Motzkin bijection) ---

    /// Unary u becomes binary: its child stays on the left, a fresh leaf becomes
    /// the right child. Returns the new leaf.
    NodeRef promote_unary(NodeRef u) {
        if (at(u).arity != Arity::Unary)
            throw std::invalid_argument("promote_unary: node is not unary");
        const NodeRef l = add_node(Arity::Leaf);
        at(u).arity = Arity::Binary;
        at(u).child[1] = l.index();
        at(l).parent = u.index();
        --unaries_;
        ++binaries_;
        return l;
    }

    /// Removes leaf l; its binary parent becomes unary over the remaining child.
    /// Returns the parent.
    NodeRef demote_binary(NodeRef l) {
        if (at(l).arity != Arity::Leaf)
            throw std::invalid_argument("demote_binary: node is not a leaf");
        if (at(l).parent == npos)
            throw std::invalid_argument("demote_binary: leaf is the root");
        const NodeRef b = NodeRef(at(l).parent);
        if (at(b).arity != Arity::Binary)
            throw std::invalid_argument("demote_binary: parent is not binary");
        const std::uint32_t s =
            at(b).child[0] == l.index() ? at(b).child[1] : at(b).child[0];
        kill(l);
        at(b).arity = Arity::Unary;
        at(b).child[0] = s;
        at(b).child[1] = npos;
        --binaries_;
        ++unaries_;
        return b;
    }

    // --- serialization & audits (arena.cpp) ---

    /// Preorder word over {B,U,L}: binary emits 'B' left right, unary 'U' child,
    /// leaf 'L'.
    std::string to_word() const;
    /// Parses a preorder word; node index equals position in the word.
    /// Throws ParseError with the position of the first violation.
    static TreeArena from_word(std::string_view word);
    std::string to_json() const;
    std::string to_dot() const;

    /// Position of v in preorder (0 = root). Linear walk, meant for reports
    /// and tests.
    std::uint32_t preorder_index(NodeRef v) const;
    NodeRef node_at_preorder(std::uint32_t pos) const;

    /// Full link/arity/count audit; throws std::logic_error on any violation.
    void validate() const;

private:
    TreeArena() = default;  // trees always come from leaf() or from_word()

    struct Node {
        Arity arity;
        bool dead;
        std::uint32_t parent;
        std::uint32_t child[2];
    };
    static_assert(sizeof(Node) == 16);

    Node& at(NodeRef v) { return nodes_[v.index()]; }
    const Node& at(NodeRef v) const { return nodes_[v.index()]; }

    NodeRef add_node(Arity a) {
        if (nodes_.size() >= max_nodes)
            throw std::length_error("TreeArena: node count exceeds 32-bit index space");
        nodes_.push_back(Node{a, false, npos, {npos, npos}});
        ++live_;
        bump(a, +1);
        return NodeRef(static_cast<std::uint32_t>(nodes_.size() - 1));
    }

    void kill(NodeRef v) {
        Node& n = at(v);
        assert(!n.dead);
        n.dead = true;
        n.parent = npos;
        n.child[0] = n.child[1] = npos;
        --live_;
        bump(n.arity, -1);
    }

    void bump(Arity a, int d) {
        switch (a) {
            case Arity::Leaf: leaves_ += d; break;
            case Arity::Unary: unaries_ += d; break;
            case Arity::Binary: binaries_ += d; break;
        }
    }

    // Makes `repl` occupy v's position: same parent slot, or root if v was root.
    void splice_above(NodeRef v, NodeRef repl) {
        const std::uint32_t p = at(v).parent;
        at(repl).parent = p;
        if (p == npos) {
            root_ = repl;
        } else {
            Node& pn = nodes_[p];
            pn.child[pn.child[0] == v.index() ? 0 : 1] = repl.index();
        }
    }

    // Makes `keep` occupy removed's position (removed is detached afterwards).
    void splice_out(NodeRef removed, NodeRef keep) {
        const std::uint32_t p = at(removed).parent;
        at(keep).parent = p;
        if (p == npos) {
            root_ = keep;
        } else {
            Node& pn = nodes_[p];
            pn.child[pn.child[0] == removed.index() ? 0 : 1] = keep.index();
        }
    }

    std::vector<Node> nodes_;
    NodeRef root_{};
    std::uint64_t live_ = 0;
    std::uint64_t leaves_ = 0;
    std::uint64_t unaries_ = 0;
    std::uint64_t binaries_ = 0;
};

}  // namespace treegen

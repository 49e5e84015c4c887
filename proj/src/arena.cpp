#include "treegen/arena.hpp"

#include <json.hpp>

#include <sstream>

namespace treegen {
namespace {

// Preorder walk over the live structure without recursion; deep chains of
// unary nodes would otherwise overflow the stack.
template <typename Visit>
void preorder_walk(const TreeArena& t, Visit&& visit) {
    if (t.size() == 0)
        return;
    std::vector<NodeRef> stack;
    stack.push_back(t.root());
    while (!stack.empty()) {
        const NodeRef v = stack.back();
        stack.pop_back();
        visit(v);
        switch (t.arity(v)) {
            case Arity::Leaf:
                break;
            case Arity::Unary:
                stack.push_back(t.only_child(v));
                break;
            case Arity::Binary:
                stack.push_back(t.child(v, Side::Right));
                stack.push_back(t.child(v, Side::Left));
                break;
        }
    }
}

}  // namespace

std::string TreeArena::to_word() const {
    std::string w;
    w.reserve(size());
    preorder_walk(*this, [&](NodeRef v) {
        switch (arity(v)) {
            case Arity::Leaf: w.push_back('L'); break;
            case Arity::Unary: w.push_back('U'); break;
            case Arity::Binary: w.push_back('B'); break;
        }
    });
    return w;
}

TreeArena TreeArena::from_word(std::string_view word) {
    if (word.empty())
        throw ParseError(0, "empty word");

    TreeArena t;
    t.reserve(word.size());
    // Pending (parent index, child slot) pairs awaiting the next node, in
    // preorder: the top of the stack is filled first.
    std::vector<std::pair<std::uint32_t, unsigned>> pending;

    for (std::size_t i = 0; i < word.size(); ++i) {
        Arity a;
        switch (word[i]) {
            case 'L': a = Arity::Leaf; break;
            case 'U': a = Arity::Unary; break;
            case 'B': a = Arity::Binary; break;
            default:
                throw ParseError(i, "invalid character (expected B, U or L)");
        }
        if (i > 0 && pending.empty())
            throw ParseError(i, "word continues past a complete tree");

        const NodeRef v = t.add_node(a);
        if (i == 0) {
            t.root_ = v;
        } else {
            const auto [p, slot] = pending.back();
            pending.pop_back();
            t.nodes_[p].child[slot] = v.index();
            t.nodes_[v.index()].parent = p;
        }
        if (a == Arity::Binary) {
            pending.emplace_back(v.index(), 1);
            pending.emplace_back(v.index(), 0);
        } else if (a == Arity::Unary) {
            pending.emplace_back(v.index(), 0);
        }
    }
    if (!pending.empty())
        throw ParseError(word.size(), "word ends before the tree is complete");
    return t;
}

std::string TreeArena::to_json() const {
    return nlohmann::json{{"size", size()}, {"word", to_word()}}.dump();
}

std::string TreeArena::to_dot() const {
    // Nodes are numbered in preorder; edges are listed parent -> child with the
    // left child first, so renderers keep the plane orientation.
    std::vector<std::uint32_t> pre(slot_count(), npos);
    std::uint32_t next = 0;
    preorder_walk(*this, [&](NodeRef v) { pre[v.index()] = next++; });

    std::ostringstream out;
    out << "digraph tree {\n";
    preorder_walk(*this, [&](NodeRef v) {
        const char* label = arity(v) == Arity::Leaf    ? "L"
                            : arity(v) == Arity::Unary ? "U"
                                                       : "B";
        out << "  n" << pre[v.index()] << " [label=\"" << label << "\"];\n";
    });
    preorder_walk(*this, [&](NodeRef v) {
        if (arity(v) == Arity::Unary) {
            out << "  n" << pre[v.index()] << " -> n" << pre[only_child(v).index()]
                << ";\n";
        } else if (arity(v) == Arity::Binary) {
            out << "  n" << pre[v.index()] << " -> n"
                << pre[child(v, Side::Left).index()] << ";\n";
            out << "  n" << pre[v.index()] << " -> n"
                << pre[child(v, Side::Right).index()] << ";\n";
        }
    });
    out << "}\n";
    return out.str();
}

std::uint32_t TreeArena::preorder_index(NodeRef target) const {
    std::uint32_t pos = 0;
    std::uint32_t found = npos;
    preorder_walk(*this, [&](NodeRef v) {
        if (v == target)
            found = pos;
        ++pos;
    });
    if (found == npos)
        throw std::invalid_argument("preorder_index: node not reachable from root");
    return found;
}

NodeRef TreeArena::node_at_preorder(std::uint32_t target) const {
    std::uint32_t pos = 0;
    NodeRef found;
    bool ok = false;
    preorder_walk(*this, [&](NodeRef v) {
        if (pos == target) {
            found = v;
            ok = true;
        }
        ++pos;
    });
    if (!ok)
        throw std::invalid_argument("node_at_preorder: position out of range");
    return found;
}

void TreeArena::validate() const {
    auto fail = [](const std::string& what) { throw std::logic_error("TreeArena: " + what); };

    std::uint64_t live = 0, leaves = 0, unaries = 0, binaries = 0, roots = 0;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.dead) {
            if (n.parent != npos || n.child[0] != npos || n.child[1] != npos)
                fail("dead node keeps links");
            continue;
        }
        ++live;
        const unsigned want = n.arity == Arity::Leaf ? 0 : n.arity == Arity::Unary ? 1 : 2;
        for (unsigned c = 0; c < 2; ++c) {
            const bool has = n.child[c] != npos;
            if (has != (c < want))
                fail("child slots do not match arity");
            if (has) {
                const Node& ch = nodes_[n.child[c]];
                if (ch.dead)
                    fail("live node points at dead child");
                if (ch.parent != i)
                    fail("child does not point back at parent");
            }
        }
        if (n.parent == npos) {
            ++roots;
            if (NodeRef(i) != root_)
                fail("node without parent is not the recorded root");
        } else {
            const Node& p = nodes_[n.parent];
            if (p.dead)
                fail("live node points at dead parent");
            if (p.child[0] != i && p.child[1] != i)
                fail("parent does not list node as a child");
        }
        switch (n.arity) {
            case Arity::Leaf: ++leaves; break;
            case Arity::Unary: ++unaries; break;
            case Arity::Binary: ++binaries; break;
        }
    }
    if (roots != 1)
        fail("expected exactly one root");
    if (live != live_ || leaves != leaves_ || unaries != unaries_ || binaries != binaries_)
        fail("cached counts out of date");
    if (leaves != binaries + 1)
        fail("leaf count must equal binary count + 1");
    if (live != 2 * binaries + unaries + 1)
        fail("size must equal 2*binary + unary + 1");

    std::uint64_t reachable = 0;
    preorder_walk(*this, [&](NodeRef) { ++reachable; });
    if (reachable != live)
        fail("live nodes not all reachable from root");
}

}  // namespace treegen

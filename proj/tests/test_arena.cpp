#include "treegen/arena.hpp"
#include "treegen/oracle.hpp"

#include <doctest.h>

using namespace treegen;

TEST_CASE("a fresh tree is a lone leaf and the root counts as a right child") {
    const TreeArena t = TreeArena::leaf();
    CHECK(t.size() == 1);
    CHECK(t.to_word() == "L");
    CHECK(t.arity(t.root()) == Arity::Leaf);
    CHECK(t.child_kind(t.root()) == ChildKind::Right);
    t.validate();
}

TEST_CASE("insert_unary_above") {
    {
        TreeArena t = TreeArena::leaf();
        const NodeRef u = t.insert_unary_above(t.root());
        CHECK(t.to_word() == "UL");
        CHECK(t.root() == u);
        CHECK(t.child_kind(t.only_child(u)) == ChildKind::Only);
        t.validate();
    }
    {
        TreeArena t = TreeArena::from_word("BLL");
        t.insert_unary_above(t.node_at_preorder(1));
        CHECK(t.to_word() == "BULL");
        t.validate();
    }
}

TEST_CASE("insert_binary_above puts the new leaf on the requested side") {
    {
        TreeArena t = TreeArena::leaf();
        const auto [b, l] = t.insert_binary_above(t.root(), Side::Right);
        CHECK(t.to_word() == "BLL");
        CHECK(t.child(b, Side::Right) == l);
        t.validate();
    }
    {
        TreeArena t = TreeArena::leaf();
        const auto [b, l] = t.insert_binary_above(t.root(), Side::Left);
        CHECK(t.to_word() == "BLL");
        CHECK(t.child(b, Side::Left) == l);
        t.validate();
    }
    {
        TreeArena t = TreeArena::from_word("UL");
        t.insert_binary_above(t.node_at_preorder(1), Side::Right);
        CHECK(t.to_word() == "UBLL");
        t.validate();
    }
}

TEST_CASE("delete_unary and delete_binary_leaf undo the grafts") {
    {
        TreeArena t = TreeArena::from_word("UL");
        const NodeRef back = t.delete_unary(t.root());
        CHECK(t.to_word() == "L");
        CHECK(back == t.root());
        t.validate();
    }
    {
        TreeArena t = TreeArena::from_word("BULL");
        t.delete_unary(t.node_at_preorder(1));
        CHECK(t.to_word() == "BLL");
        t.validate();
    }
    {
        TreeArena t = TreeArena::from_word("BLL");
        t.delete_binary_leaf(t.node_at_preorder(2));
        CHECK(t.to_word() == "L");
        t.validate();
    }
    {
        TreeArena t = TreeArena::from_word("BBLLL");
        t.delete_binary_leaf(t.node_at_preorder(4));
        CHECK(t.to_word() == "BLL");
        t.validate();
    }
}

TEST_CASE("delete primitives reject wrong arities") {
    TreeArena t = TreeArena::from_word("BLL");
    CHECK_THROWS_AS(t.delete_unary(t.root()), std::invalid_argument);
    CHECK_THROWS_AS(t.delete_binary_leaf(t.root()), std::invalid_argument);
    TreeArena sole = TreeArena::leaf();
    CHECK_THROWS_AS(sole.delete_binary_leaf(sole.root()), std::invalid_argument);
    TreeArena ul = TreeArena::from_word("UL");
    CHECK_THROWS_AS(ul.delete_binary_leaf(ul.node_at_preorder(1)), std::invalid_argument);
}

TEST_CASE("graft/prune round-trips over every tree of size <= 9, every node") {
    for (const auto& word : [] {
             std::vector<std::string> all;
             for (unsigned s = 1; s <= 9; ++s)
                 for (auto& w : oracle::enumerate_motzkin(s))
                     all.push_back(std::move(w));
             return all;
         }()) {
        const TreeArena base = TreeArena::from_word(word);
        for (const NodeRef v : oracle::preorder_nodes(base)) {
            {
                TreeArena t = base;
                const NodeRef u = t.insert_unary_above(v);
                t.validate();
                CHECK(t.delete_unary(u) == v);
                CHECK(t.to_word() == word);
                t.validate();
            }
            for (const Side side : {Side::Left, Side::Right}) {
                TreeArena t = base;
                const auto [b, l] = t.insert_binary_above(v, side);
                t.validate();
                CHECK(t.delete_binary_leaf(l) == v);
                CHECK(t.to_word() == word);
                t.validate();
            }
            {
                TreeArena t = base;
                if (t.arity(v) == Arity::Unary) {
                    const NodeRef l = t.promote_unary(v);
                    t.validate();
                    CHECK(t.demote_binary(l) == v);
                    CHECK(t.to_word() == word);
                    t.validate();
                }
            }
        }
    }
}

TEST_CASE("word parsing accepts exactly the valid words") {
    CHECK(TreeArena::from_word("BULL").to_word() == "BULL");

    const auto position_of = [](const char* w) {
        try {
            TreeArena::from_word(w);
        } catch (const ParseError& e) {
            return e.position;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(position_of("") == 0);
    CHECK(position_of("X") == 0);
    CHECK(position_of("BULLL") == 4);  // word continues past a complete tree
    CHECK(position_of("LL") == 1);
    CHECK(position_of("BU") == 2);     // truncated
    CHECK(position_of("BLX") == 2);
}

TEST_CASE("word round-trips over all trees with at most 11 nodes") {
    for (unsigned s = 1; s <= 11; ++s) {
        for (const auto& word : oracle::enumerate_motzkin(s)) {
            const TreeArena t = TreeArena::from_word(word);
            CHECK(t.to_word() == word);
            CHECK(t.size() == s);
            // node index equals position in the word
            for (std::uint32_t i = 0; i < s; ++i)
                CHECK(t.node_at_preorder(i) == NodeRef(i));
        }
    }
}

TEST_CASE("json and dot exports") {
    const TreeArena t = TreeArena::from_word("BULL");
    CHECK(t.to_json() == R"({"size":4,"word":"BULL"})");

    const TreeArena b = TreeArena::from_word("BLL");
    CHECK(b.to_dot() ==
          "digraph tree {\n"
          "  n0 [label=\"B\"];\n"
          "  n1 [label=\"L\"];\n"
          "  n2 [label=\"L\"];\n"
          "  n0 -> n1;\n"
          "  n0 -> n2;\n"
          "}\n");
}

TEST_CASE("dot numbering follows preorder even after deletes") {
    TreeArena t = TreeArena::from_word("BLBLL");
    t.delete_binary_leaf(t.node_at_preorder(3));  // kills two slots
    CHECK(t.to_word() == "BLL");
    CHECK(t.to_dot().find("n3") == std::string::npos);
}

TEST_CASE("counts and memory accounting") {
    TreeArena t = TreeArena::from_word("BULBULL");
    CHECK(t.size() == 7);
    CHECK(t.leaf_count() == 3);
    CHECK(t.unary_count() == 2);
    CHECK(t.binary_count() == 2);

    TreeArena r = TreeArena::leaf();
    r.reserve(101);
    CHECK(r.memory_bytes() == 101 * 16);
    CHECK_THROWS_AS(r.reserve(std::uint64_t{5} << 32), std::length_error);
}

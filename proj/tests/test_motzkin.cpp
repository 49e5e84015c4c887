#include "treegen/motzkin.hpp"
#include "treegen/oracle.hpp"

#include <doctest.h>

using namespace treegen;
using oracle::BigInt;
using oracle::BigRational;

namespace {
constexpr std::uint64_t kSeed = 0xC0FFEE123456789ull;

ColorPoint point(const TreeArena& t, Color c, std::uint32_t preorder) {
    return {c, t.node_at_preorder(preorder)};
}
}  // namespace

TEST_CASE("graft_G1 keeps leaf colors and turns green points into binary nodes") {
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G1(t, point(t, Color::Red, 0));
        CHECK(oracle::pointed_key(t, cp) == "UL|red@1");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G1(t, point(t, Color::Blue, 0));
        CHECK(oracle::pointed_key(t, cp) == "UL|blue@1");
    }
    {
        TreeArena t = TreeArena::from_word("UL");
        const ColorPoint cp = graft_G1(t, point(t, Color::Green, 0));
        CHECK(oracle::pointed_key(t, cp) == "BLL|red@2");
    }
}

TEST_CASE("graft_G2 creates the green point") {
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G2(t, t.node_at_preorder(0));
        CHECK(oracle::pointed_key(t, cp) == "UL|green@0");
        CHECK(t.size() == 2);
    }
    {
        TreeArena t = TreeArena::from_word("BLL");
        const ColorPoint cp = graft_G2(t, t.node_at_preorder(0));
        CHECK(oracle::pointed_key(t, cp) == "UBLL|green@0");
    }
}

TEST_CASE("graft_G345 cases") {
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G345(t, t.root(), GCase::G3);
        CHECK(oracle::pointed_key(t, cp) == "BLL|blue@2");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G345(t, t.root(), GCase::G4);
        CHECK(oracle::pointed_key(t, cp) == "BLL|red@1");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_G345(t, t.root(), GCase::G5);
        CHECK(oracle::pointed_key(t, cp) == "BLL|blue@1");
    }
    TreeArena t = TreeArena::leaf();
    CHECK_THROWS_AS(graft_G345(t, t.root(), GCase::G1), std::invalid_argument);
}

TEST_CASE("graft_G_inverse dispatches on the proof cases") {
    {
        TreeArena t = TreeArena::from_word("UL");
        const GInverse gi = graft_G_inverse(t, point(t, Color::Red, 1));
        CHECK(gi.applied == GCase::G1);
        CHECK(t.to_word() == "L");
        CHECK(oracle::pointed_key(t, std::get<ColorPoint>(gi.restored)) == "L|red@0");
    }
    {
        TreeArena t = TreeArena::from_word("BLL");
        const GInverse gi = graft_G_inverse(t, point(t, Color::Red, 2));
        CHECK(gi.applied == GCase::G1);
        CHECK(t.to_word() == "UL");
        CHECK(oracle::pointed_key(t, std::get<ColorPoint>(gi.restored)) == "UL|green@0");
    }
    {
        TreeArena t = TreeArena::from_word("BLL");
        const GInverse gi = graft_G_inverse(t, point(t, Color::Blue, 2));
        CHECK(gi.applied == GCase::G3);
        CHECK(t.to_word() == "L");
        CHECK(std::get<NodeRef>(gi.restored) == t.root());
    }
    TreeArena sole = TreeArena::leaf();
    CHECK_THROWS_AS(graft_G_inverse(sole, point(sole, Color::Red, 0)),
                    std::invalid_argument);
}

TEST_CASE("G and its inverse are mutually inverse over all trees up to size 8") {
    const auto battery = oracle::battery_graft_G(8);
    CHECK(battery.failures.empty());
    CHECK(battery.checks > 0);
}

TEST_CASE("a try of size 1 needs only the start bit") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        MeteredBitSource src(seed);
        BitChoices choices(src);
        const auto r = try_sample_motzkin(1, choices);
        REQUIRE(r.has_value());
        CHECK(r->to_word() == "L");
        CHECK(src.bits_consumed() == 1);
    }
}

TEST_CASE("every color-pointed tree is reached with probability 1/(2*3^(n-1))") {
    for (unsigned n = 1; n <= 4; ++n) {
        const auto audit = oracle::audit_motzkin_try(n);
        BigInt power = 1;
        for (unsigned k = 1; k < n; ++k)
            power *= 3;
        const BigRational expected(BigInt(1), 2 * power);
        const BigInt pointed = (n + 1) * oracle::count_motzkin(n);
        CHECK(BigInt(audit.reach.size()) == pointed);
        for (const auto& [key, prob] : audit.reach)
            CHECK(prob == expected);
        CHECK(audit.success_mass == BigRational(pointed) * expected);
        // overshoot results have n+1 nodes, so the reach law gives 1/(2*3^n)
        const BigRational overshoot_each = expected / 3;
        for (const auto& [key, prob] : audit.reach_overshoot)
            CHECK(prob == overshoot_each);
        CHECK(audit.success_mass + audit.overshoot_mass + audit.fail_mass == 1);
    }
}

TEST_CASE("the full sampler rejects overshoot and returns exact sizes") {
    {
        MeteredBitSource src(kSeed);
        const auto [tree, report] = sample_motzkin(1, src);
        CHECK(tree.to_word() == "L");
        CHECK(report.restarts == 0);
        CHECK(report.bits_consumed == 1);
    }
    MeteredBitSource src(kSeed);
    for (int i = 0; i < 200; ++i) {
        const auto [tree, report] = sample_motzkin(5, src);
        CHECK(tree.size() == 5);
        tree.validate();
    }
}

TEST_CASE("upward travel is bounded by the size increments") {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        MeteredBitSource src(seed);
        BitChoices choices(src);
        TryTrace trace;
        const auto r = try_sample_motzkin(40, choices, &trace);
        if (!r)
            continue;
        ++successes;
        CHECK(trace.upward_travel <= trace.size_increments);
        CHECK(trace.size_increments == r->size() - 1);
    }
    CHECK(successes > 0);
}

TEST_CASE("chi-square against the enumeration at sizes 5 and 6") {
    for (unsigned size : {5u, 6u}) {
        auto table = oracle::TreeClassTable::uniform(oracle::enumerate_motzkin(size));
        for (int i = 0; i < 100000; ++i) {
            MeteredBitSource src(derive_seed(kSeed + size, i));
            table.record(sample_motzkin(size, src).first.to_word());
        }
        const auto res = oracle::chi_square_test(table, 0.001);
        CHECK(res.pass);
    }
}

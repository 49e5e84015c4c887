#include "treegen/catalan.hpp"
#include "treegen/oracle.hpp"

#include <doctest.h>

using namespace treegen;
using oracle::BigInt;
using oracle::BigRational;

namespace {
constexpr std::uint64_t kSeed = 0xC0FFEE123456789ull;
}

TEST_CASE("graft_F places the leaf and color by case") {
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_F(t, t.root(), FCase::F1);
        CHECK(t.to_word() == "BLL");
        CHECK(oracle::pointed_key(t, cp) == "BLL|red@2");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_F(t, t.root(), FCase::F4);
        CHECK(oracle::pointed_key(t, cp) == "BLL|blue@1");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_F(t, t.root(), FCase::F2);
        CHECK(oracle::pointed_key(t, cp) == "BLL|blue@2");
    }
    {
        TreeArena t = TreeArena::leaf();
        const ColorPoint cp = graft_F(t, t.root(), FCase::F3);
        CHECK(oracle::pointed_key(t, cp) == "BLL|red@1");
    }
}

TEST_CASE("graft_F_inverse recovers the grafting site") {
    TreeArena t = TreeArena::from_word("BLL");
    const NodeRef v = graft_F_inverse(t, {Color::Red, t.node_at_preorder(2)});
    CHECK(t.to_word() == "L");
    CHECK(v == t.root());

    TreeArena t2 = TreeArena::from_word("BLL");
    const NodeRef v2 = graft_F_inverse(t2, {Color::Blue, t2.node_at_preorder(1)});
    CHECK(t2.to_word() == "L");
    CHECK(v2 == t2.root());
}

TEST_CASE("graft_F_inverse rejects too-small trees and green points") {
    TreeArena sole = TreeArena::leaf();
    CHECK_THROWS_AS(graft_F_inverse(sole, {Color::Red, sole.root()}), std::invalid_argument);
    TreeArena t = TreeArena::from_word("BULL");
    CHECK_THROWS_AS(graft_F_inverse(t, {Color::Green, t.node_at_preorder(1)}),
                    std::invalid_argument);
}

TEST_CASE("F and its inverse are mutually inverse over all trees up to size 11") {
    const auto battery = oracle::battery_graft_F(11);
    CHECK(battery.failures.empty());
    CHECK(battery.checks > 0);
}

TEST_CASE("a try of size 0 returns the lone leaf for free") {
    MeteredBitSource src(kSeed);
    BitChoices choices(src);
    const auto r = try_sample_binary(0, choices);
    REQUIRE(r.has_value());
    CHECK(r->to_word() == "L");
    CHECK(src.bits_consumed() == 0);
}

TEST_CASE("a try of size 1 always yields BLL for exactly 2 bits") {
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        MeteredBitSource src(seed);
        BitChoices choices(src);
        const auto r = try_sample_binary(1, choices);
        REQUIRE(r.has_value());
        CHECK(r->to_word() == "BLL");
        CHECK(src.bits_consumed() == 2);
    }
}

TEST_CASE("every color-pointed tree is reached with probability 1/(2*4^n)") {
    for (unsigned n = 0; n <= 3; ++n) {
        const auto audit = oracle::audit_binary_try(n, /*faithful=*/true);
        const BigRational expected(BigInt(1), BigInt(1) << (2 * n + 1));
        const BigInt trees = (2 * n + 2) * oracle::count_binary(n);
        CHECK(BigInt(audit.reach.size()) == trees);
        for (const auto& [key, prob] : audit.reach)
            CHECK(prob == expected);
        CHECK(audit.success_mass == BigRational(trees) * expected);
        CHECK(audit.success_mass + audit.fail_mass == 1);
        CHECK(audit.overshoot_mass == 0);
    }
}

TEST_CASE("the efficient sampler keeps the pointed tree uniform at every step") {
    for (unsigned i = 1; i <= 3; ++i) {
        const auto audit = oracle::audit_binary_efficient(i);
        const BigInt trees = (2 * i + 2) * oracle::count_binary(i);
        const BigRational expected = BigRational(1) / BigRational(trees);
        CHECK(BigInt(audit.reach.size()) == trees);
        for (const auto& [key, prob] : audit.reach)
            CHECK(prob == expected);
        CHECK(audit.success_mass == 1);
        CHECK(audit.fail_mass == 0);
    }
}

TEST_CASE("rejection sampler restarts follow the success rate at n=3") {
    // success probability 0.3125 in faithful mode, so mean restarts is 1/p - 1 = 2.2
    MeteredBitSource src(kSeed);
    std::uint64_t restarts = 0;
    const int runs = 20000;
    for (int i = 0; i < runs; ++i)
        restarts += sample_binary_rejection(3, src, /*faithful=*/true).second.restarts;
    const double mean = static_cast<double>(restarts) / runs;
    CHECK(mean == doctest::Approx(2.2).epsilon(0.05));
}

TEST_CASE("small sizes across the three samplers") {
    MeteredBitSource src(kSeed);
    const auto [one, rep_one] = sample_binary_efficient(1, src);
    CHECK(one.to_word() == "BLL");
    CHECK(rep_one.bits_consumed == 2);  // the first step can never bottom out

    const auto [zero, rep_zero] = sample_binary_remy_classic(0, src);
    CHECK(zero.to_word() == "L");
    CHECK(rep_zero.bits_consumed == 0);

    const auto [r0, rep_r0] = sample_binary_rejection(0, src);
    CHECK(r0.to_word() == "L");
    CHECK(rep_r0.restarts == 0);
}

TEST_CASE("the efficient sampler consumes exactly 2n bits plus fallback draws") {
    std::uint64_t zero_fallback_runs = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        MeteredBitSource src(seed);
        const auto [tree, report] = sample_binary_efficient(40, src);
        CHECK(tree.size() == 81);
        CHECK(report.bits_consumed >= 80);
        if (report.repoint_fallbacks == 0) {
            CHECK(report.bits_consumed == 80);
            ++zero_fallback_runs;
        } else {
            CHECK(report.bits_consumed > 80);
        }
        CHECK(report.restarts == 0);
    }
    CHECK(zero_fallback_runs > 0);  // plenty of runs never hit the fallback
}

TEST_CASE("total upward travel in a successful try is at most n") {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        MeteredBitSource src(seed);
        BitChoices choices(src);
        TryTrace trace;
        const auto r = try_sample_binary(50, choices, false, &trace);
        if (!r)
            continue;
        ++successes;
        CHECK(trace.upward_travel <= 50);
    }
    CHECK(successes > 0);
}

TEST_CASE("all three samplers pass a chi-square against the enumeration at n=4") {
    const auto classes = oracle::enumerate_binary(4);
    const int samples = 100000;

    const auto run = [&](auto&& sample_one) {
        auto table = oracle::TreeClassTable::uniform(classes);
        for (int i = 0; i < samples; ++i)
            table.record(sample_one(i).to_word());
        return oracle::chi_square_test(table, 0.001);
    };

    const auto rejection = run([&](int i) {
        MeteredBitSource src(derive_seed(kSeed, i));
        return sample_binary_rejection(4, src).first;
    });
    CHECK(rejection.pass);

    const auto efficient = run([&](int i) {
        MeteredBitSource src(derive_seed(kSeed ^ 0xABCDEF, i));
        return sample_binary_efficient(4, src).first;
    });
    CHECK(efficient.pass);

    const auto classic = run([&](int i) {
        MeteredBitSource src(derive_seed(kSeed ^ 0x123456, i));
        return sample_binary_remy_classic(4, src).first;
    });
    CHECK(classic.pass);
}

TEST_CASE("trees produced by every sampler validate") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        MeteredBitSource src(seed);
        sample_binary_rejection(6, src).first.validate();
        sample_binary_efficient(6, src).first.validate();
        sample_binary_remy_classic(6, src).first.validate();
    }
}

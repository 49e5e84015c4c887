#pragma once

#include "treegen/catalan.hpp"
#include "treegen/motzkin.hpp"
#include "treegen/weighted.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <vector>

// Ground truth: exhaustive enumeration, exact counting and exact run
// probabilities, computed independently of the samplers they check.
namespace treegen::oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// All binary trees with the given number of internal nodes (2n+1 nodes total),
/// as sorted preorder words. Capped at 12 internal nodes.
std::vector<std::string> enumerate_binary(unsigned internal_nodes);

/// All unary-binary trees with the given node count, as sorted preorder words.
/// Capped at 12 nodes.
std::vector<std::string> enumerate_motzkin(unsigned size);

/// Exact counts from the standard recurrences; must agree with the
/// enumeration cardinalities wherever both run.
BigInt count_binary(unsigned internal_nodes);
BigInt count_motzkin(unsigned size);

/// Number of unary-binary trees with `size` nodes and k unary nodes, indexed by k.
std::vector<BigInt> unary_profile(unsigned size);

/// Sum over all unary-binary trees with `size` nodes of u^(#unary nodes).
BigRational weighted_mass(unsigned size, UnaryWeight u);

// --- statistical machinery ---

/// Observed counts over an enumerated family against an expected law.
class TreeClassTable {
public:
    static TreeClassTable uniform(std::vector<std::string> classes);
    /// Expected law proportional to u^(#unary), read off each word.
    static TreeClassTable weighted(std::vector<std::string> classes, UnaryWeight u);

    void record(const std::string& word);
    std::uint64_t total() const { return total_; }
    const std::vector<std::string>& classes() const { return classes_; }
    const std::vector<double>& expected() const { return expected_; }
    const std::vector<std::uint64_t>& observed() const { return observed_; }

    /// Largest |observed/total - expected| summed over classes, halved.
    double total_variation() const;
    /// "class,expected,observed,contribution" rows.
    std::string to_csv() const;

private:
    TreeClassTable(std::vector<std::string> classes, std::vector<double> expected);
    std::vector<std::string> classes_;
    std::vector<double> expected_;
    std::vector<std::uint64_t> observed_;
    std::map<std::string, std::size_t> index_;
    std::uint64_t total_ = 0;
};

struct ChiSquareResult {
    double statistic = 0;
    double threshold = 0;
    unsigned dof = 0;
    bool pass = false;
};

/// Quantiles via Acklam's rational approximation for the normal and the
/// Wilson-Hilferty cube for the chi-square; both documented in the README.
double normal_quantile(double p);
double chi_square_quantile(double p, unsigned dof);

/// Pearson test at the given significance. Requires every expected class
/// count to be at least 5; throws otherwise.
ChiSquareResult chi_square_test(const TreeClassTable& table, double significance);

// --- exhaustive run enumeration ---
//
// The samplers draw through the ChoiceSource interface, so a run is determined
// by the sequence of choice outcomes. ScriptChoices replays a fixed prefix of
// outcomes and throws NeedChoice when the prefix runs out; for_each_run grows
// prefixes depth-first until every run completes, handing each completed run
// to the visitor with its exact rational probability.

enum class ChoiceKind : std::uint8_t { Coin, Quad, Trit, Node, Branch };

struct ScriptEntry {
    ChoiceKind kind;
    std::uint64_t value;
    BigRational prob;
};

struct ChoiceRequest {
    ChoiceKind kind = ChoiceKind::Coin;
    std::uint64_t domain = 0;                // m for Node draws
    std::vector<std::uint64_t> masses;       // for Branch draws
    unsigned exponent = 0;
};

struct NeedChoice {
    ChoiceRequest request;
};

class ScriptChoices {
public:
    explicit ScriptChoices(const std::vector<ScriptEntry>& script) : script_(&script) {}

    int coin() { return static_cast<int>(replay(make_request(ChoiceKind::Coin))); }
    unsigned quad() { return static_cast<unsigned>(replay(make_request(ChoiceKind::Quad))); }
    unsigned trit() { return static_cast<unsigned>(replay(make_request(ChoiceKind::Trit))); }
    std::uint64_t uniform_node(std::uint64_t m) {
        ChoiceRequest req = make_request(ChoiceKind::Node);
        req.domain = m;
        return replay(std::move(req));
    }
    unsigned categorical(std::span<const std::uint64_t> masses, unsigned exponent) {
        ChoiceRequest req = make_request(ChoiceKind::Branch);
        req.masses.assign(masses.begin(), masses.end());
        req.exponent = exponent;
        return static_cast<unsigned>(replay(std::move(req)));
    }

    std::size_t consumed() const { return pos_; }

private:
    static ChoiceRequest make_request(ChoiceKind kind) {
        ChoiceRequest req;
        req.kind = kind;
        return req;
    }

    std::uint64_t replay(ChoiceRequest req) {
        if (pos_ == script_->size())
            throw NeedChoice{std::move(req)};
        const ScriptEntry& e = (*script_)[pos_++];
        if (e.kind != req.kind)
            throw std::logic_error("ScriptChoices: replay diverged from recorded run");
        return e.value;
    }

    const std::vector<ScriptEntry>* script_;
    std::size_t pos_ = 0;
};

static_assert(ChoiceSource<ScriptChoices>);

std::vector<ScriptEntry> expand_request(const ChoiceRequest& req);

template <typename Driver, typename Visit>
void for_each_run(Driver&& driver, Visit&& visit) {
    std::vector<ScriptEntry> script;
    auto walk = [&](auto&& self) -> void {
        ScriptChoices src(script);
        try {
            auto result = driver(src);
            if (src.consumed() != script.size())
                throw std::logic_error("for_each_run: run ignored recorded choices");
            BigRational p = 1;
            for (const auto& e : script)
                p *= e.prob;
            visit(result, p);
        } catch (const NeedChoice& need) {
            for (const ScriptEntry& outcome : expand_request(need.request)) {
                script.push_back(outcome);
                self(self);
                script.pop_back();
            }
        }
    };
    walk(walk);
}

// --- run audits against the closed-form reach probabilities ---

/// Canonical identity of a pointed tree: "<word>|<color>@<preorder index>".
std::string pointed_key(const TreeArena& t, ColorPoint cp);

struct PathAudit {
    std::map<std::string, BigRational> reach;            // results of the target size
    std::map<std::string, BigRational> reach_overshoot;  // size n+1 results
    BigRational success_mass = 0;
    BigRational overshoot_mass = 0;
    BigRational fail_mass = 0;
};

PathAudit audit_binary_try(unsigned n, bool faithful = true);
PathAudit audit_motzkin_try(unsigned n);
PathAudit audit_weighted_try(unsigned n, const BranchPlan& plan);
/// Distribution of the pointed tree after n steps of the never-failing sampler.
PathAudit audit_binary_efficient(unsigned n);

// --- round-trip batteries over full enumerations ---

struct BatteryResult {
    std::uint64_t checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

BatteryResult battery_repoint_binary(unsigned max_size);
BatteryResult battery_repoint_motzkin(unsigned max_size);
BatteryResult battery_graft_F(unsigned max_size);
BatteryResult battery_graft_G(unsigned max_size);
BatteryResult battery_graft_H(unsigned max_size);

/// Color points of a tree in a fixed order: blue then red per leaf (preorder),
/// then green per unary node.
std::vector<ColorPoint> all_color_points(const TreeArena& t);
std::vector<NodeRef> preorder_nodes(const TreeArena& t);

}  // namespace treegen::oracle

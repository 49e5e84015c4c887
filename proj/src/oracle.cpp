#include "treegen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace treegen::oracle {

namespace {

constexpr unsigned kEnumerationCap = 12;

void check_cap(unsigned n) {
    if (n > kEnumerationCap)
        throw std::invalid_argument("enumeration capped at size 12");
}

}  // namespace

std::vector<std::string> enumerate_binary(unsigned internal_nodes) {
    check_cap(internal_nodes);
    std::vector<std::vector<std::string>> by_internal(internal_nodes + 1);
    by_internal[0] = {"L"};
    for (unsigned k = 1; k <= internal_nodes; ++k) {
        for (unsigned i = 0; i < k; ++i)
            for (const auto& left : by_internal[i])
                for (const auto& right : by_internal[k - 1 - i])
                    by_internal[k].push_back("B" + left + right);
    }
    std::sort(by_internal[internal_nodes].begin(), by_internal[internal_nodes].end());
    return by_internal[internal_nodes];
}

std::vector<std::string> enumerate_motzkin(unsigned size) {
    check_cap(size);
    if (size == 0)
        return {};
    std::vector<std::vector<std::string>> by_size(size + 1);
    by_size[1] = {"L"};
    for (unsigned s = 2; s <= size; ++s) {
        for (const auto& sub : by_size[s - 1])
            by_size[s].push_back("U" + sub);
        for (unsigned i = 1; i + 1 < s; ++i)
            for (const auto& left : by_size[i])
                for (const auto& right : by_size[s - 1 - i])
                    by_size[s].push_back("B" + left + right);
    }
    std::sort(by_size[size].begin(), by_size[size].end());
    return by_size[size];
}

BigInt count_binary(unsigned internal_nodes) {
    BigInt c = 1;
    for (unsigned k = 0; k < internal_nodes; ++k) {
        const BigInt numerator = c * 2 * (2 * k + 1);
        if (numerator % (k + 2) != 0)
            throw std::logic_error("count_binary: recurrence division not exact");
        c = numerator / (k + 2);
    }
    return c;
}

BigInt count_motzkin(unsigned size) {
    if (size == 0)
        return 0;
    if (size <= 2)
        return 1;
    BigInt prev2 = 1, prev1 = 1;  // sizes 1 and 2
    for (unsigned n = 3; n <= size; ++n) {
        const BigInt numerator = (2 * n - 1) * prev1 + 3 * (n - 2) * prev2;
        if (numerator % (n + 1) != 0)
            throw std::logic_error("count_motzkin: recurrence division not exact");
        prev2 = prev1;
        prev1 = numerator / (n + 1);
    }
    return prev1;
}

std::vector<BigInt> unary_profile(unsigned size) {
    check_cap(size);
    if (size == 0)
        return {};
    // profile[s][k]: trees with s nodes and k unary nodes
    std::vector<std::vector<BigInt>> profile(size + 1);
    profile[1] = {BigInt(1)};
    for (unsigned s = 2; s <= size; ++s) {
        profile[s].assign(s, BigInt(0));
        for (unsigned k = 0; k < profile[s - 1].size(); ++k)
            profile[s][k + 1] += profile[s - 1][k];  // unary root
        for (unsigned i = 1; i + 1 < s; ++i) {
            const unsigned j = s - 1 - i;
            for (unsigned a = 0; a < profile[i].size(); ++a)
                for (unsigned b = 0; b < profile[j].size(); ++b)
                    profile[s][a + b] += profile[i][a] * profile[j][b];  // binary root
        }
    }
    return profile[size];
}

BigRational weighted_mass(unsigned size, UnaryWeight u) {
    const BigRational weight(BigInt(u.numerator), BigInt(1) << u.exponent);
    BigRational mass = 0;
    BigRational power = 1;
    for (const BigInt& count : unary_profile(size)) {
        mass += BigRational(count) * power;
        power *= weight;
    }
    return mass;
}

// --- statistical machinery ---

TreeClassTable::TreeClassTable(std::vector<std::string> classes, std::vector<double> expected)
    : classes_(std::move(classes)),
      expected_(std::move(expected)),
      observed_(classes_.size(), 0) {
    for (std::size_t i = 0; i < classes_.size(); ++i)
        index_.emplace(classes_[i], i);
}

TreeClassTable TreeClassTable::uniform(std::vector<std::string> classes) {
    if (classes.empty())
        throw std::invalid_argument("TreeClassTable: no classes");
    std::vector<double> expected(classes.size(), 1.0 / static_cast<double>(classes.size()));
    return TreeClassTable(std::move(classes), std::move(expected));
}

TreeClassTable TreeClassTable::weighted(std::vector<std::string> classes, UnaryWeight u) {
    if (classes.empty())
        throw std::invalid_argument("TreeClassTable: no classes");
    const BigRational weight(BigInt(u.numerator), BigInt(1) << u.exponent);
    std::vector<BigRational> raw;
    raw.reserve(classes.size());
    BigRational mass = 0;
    for (const auto& word : classes) {
        const auto unary = std::count(word.begin(), word.end(), 'U');
        BigRational w = 1;
        for (long k = 0; k < unary; ++k)
            w *= weight;
        raw.push_back(w);
        mass += w;
    }
    std::vector<double> expected;
    expected.reserve(classes.size());
    for (const auto& w : raw)
        expected.push_back((w / mass).convert_to<double>());
    return TreeClassTable(std::move(classes), std::move(expected));
}

void TreeClassTable::record(const std::string& word) {
    const auto it = index_.find(word);
    if (it == index_.end())
        throw std::invalid_argument("TreeClassTable: word outside the enumerated family: " +
                                    word);
    ++observed_[it->second];
    ++total_;
}

double TreeClassTable::total_variation() const {
    double tv = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i)
        tv += std::abs(static_cast<double>(observed_[i]) / static_cast<double>(total_) -
                       expected_[i]);
    return tv / 2;
}

std::string TreeClassTable::to_csv() const {
    std::ostringstream out;
    out << "class,expected,observed,contribution\n";
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const double e = expected_[i] * static_cast<double>(total_);
        const double o = static_cast<double>(observed_[i]);
        const double contribution = e > 0 ? (o - e) * (o - e) / e : 0;
        out << classes_[i] << ',' << e << ',' << observed_[i] << ',' << contribution << '\n';
    }
    return out.str();
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    // Acklam's rational approximation; relative error below 1.2e-9 everywhere.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - p_low) {
        const double q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

double chi_square_quantile(double p, unsigned dof) {
    if (dof == 0)
        throw std::invalid_argument("chi_square_quantile: dof must be positive");
    // Wilson-Hilferty cube approximation.
    const double v = dof;
    const double z = normal_quantile(p);
    const double t = 1.0 - 2.0 / (9.0 * v) + z * std::sqrt(2.0 / (9.0 * v));
    return v * t * t * t;
}

ChiSquareResult chi_square_test(const TreeClassTable& table, double significance) {
    const double n = static_cast<double>(table.total());
    ChiSquareResult res;
    res.dof = static_cast<unsigned>(table.classes().size()) - 1;
    for (std::size_t i = 0; i < table.classes().size(); ++i) {
        const double e = table.expected()[i] * n;
        if (e < 5.0)
            throw std::invalid_argument("chi_square_test: expected class count below 5");
        const double o = static_cast<double>(table.observed()[i]);
        res.statistic += (o - e) * (o - e) / e;
    }
    res.threshold = chi_square_quantile(1.0 - significance, res.dof);
    res.pass = res.statistic < res.threshold;
    return res;
}

// --- exhaustive run enumeration ---

std::vector<ScriptEntry> expand_request(const ChoiceRequest& req) {
    std::vector<ScriptEntry> out;
    switch (req.kind) {
        case ChoiceKind::Coin:
            for (std::uint64_t v = 0; v < 2; ++v)
                out.push_back({ChoiceKind::Coin, v, BigRational(1, 2)});
            break;
        case ChoiceKind::Quad:
            for (std::uint64_t v = 0; v < 4; ++v)
                out.push_back({ChoiceKind::Quad, v, BigRational(1, 4)});
            break;
        case ChoiceKind::Trit:
            for (std::uint64_t v = 0; v < 3; ++v)
                out.push_back({ChoiceKind::Trit, v, BigRational(1, 3)});
            break;
        case ChoiceKind::Node:
            for (std::uint64_t v = 0; v < req.domain; ++v)
                out.push_back({ChoiceKind::Node, v, BigRational(1, req.domain)});
            break;
        case ChoiceKind::Branch: {
            const BigInt denom = BigInt(1) << req.exponent;
            for (std::uint64_t j = 0; j < req.masses.size(); ++j)
                if (req.masses[j] > 0)
                    out.push_back(
                        {ChoiceKind::Branch, j, BigRational(BigInt(req.masses[j]), denom)});
            break;
        }
    }
    return out;
}

std::vector<NodeRef> preorder_nodes(const TreeArena& t) {
    std::vector<NodeRef> order;
    order.reserve(t.size());
    std::vector<NodeRef> stack{t.root()};
    while (!stack.empty()) {
        const NodeRef v = stack.back();
        stack.pop_back();
        order.push_back(v);
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
    return order;
}

std::vector<ColorPoint> all_color_points(const TreeArena& t) {
    std::vector<ColorPoint> points;
    const auto nodes = preorder_nodes(t);
    for (const NodeRef v : nodes)
        if (t.arity(v) == Arity::Leaf) {
            points.push_back({Color::Blue, v});
            points.push_back({Color::Red, v});
        }
    for (const NodeRef v : nodes)
        if (t.arity(v) == Arity::Unary)
            points.push_back({Color::Green, v});
    return points;
}

std::string pointed_key(const TreeArena& t, ColorPoint cp) {
    return t.to_word() + "|" + to_debug_string(t, cp);
}

namespace {

template <typename Driver>
PathAudit run_audit(unsigned target_size, Driver&& driver) {
    PathAudit audit;
    for_each_run(driver, [&](const std::optional<std::pair<TreeArena, ColorPoint>>& result,
                             const BigRational& p) {
        if (!result) {
            audit.fail_mass += p;
            return;
        }
        const auto& [tree, point] = *result;
        if (tree.size() == target_size) {
            audit.reach[pointed_key(tree, point)] += p;
            audit.success_mass += p;
        } else {
            audit.reach_overshoot[pointed_key(tree, point)] += p;
            audit.overshoot_mass += p;
        }
    });
    return audit;
}

}  // namespace

PathAudit audit_binary_try(unsigned n, bool faithful) {
    return run_audit(2 * n + 1, [n, faithful](ScriptChoices& src) {
        return try_sample_binary_pointed(std::uint64_t{n}, src, faithful);
    });
}

PathAudit audit_motzkin_try(unsigned n) {
    return run_audit(n, [n](ScriptChoices& src) {
        return try_sample_motzkin_pointed(std::uint64_t{n}, src);
    });
}

PathAudit audit_weighted_try(unsigned n, const BranchPlan& plan) {
    return run_audit(n, [n, &plan](ScriptChoices& src) {
        return try_sample_weighted_pointed(std::uint64_t{n}, plan, src);
    });
}

PathAudit audit_binary_efficient(unsigned n) {
    return run_audit(2 * n + 1, [n](ScriptChoices& src) {
        return std::optional(sample_binary_efficient_pointed(std::uint64_t{n}, src));
    });
}

// --- round-trip batteries ---

namespace {

struct Battery {
    BatteryResult result;

    void check(bool ok, const std::string& context) {
        ++result.checks;
        if (!ok)
            result.failures.push_back(context);
    }
};

FCase fcase_of(Side side, Color color) {
    if (side == Side::Right)
        return color == Color::Red ? FCase::F1 : FCase::F2;
    return color == Color::Red ? FCase::F3 : FCase::F4;
}

std::vector<std::string> binary_words_up_to(unsigned max_size) {
    std::vector<std::string> words;
    for (unsigned n = 0; 2 * n + 1 <= max_size; ++n)
        for (auto& w : enumerate_binary(n))
            words.push_back(std::move(w));
    return words;
}

std::vector<std::string> motzkin_words_up_to(unsigned max_size) {
    std::vector<std::string> words;
    for (unsigned s = 1; s <= max_size; ++s)
        for (auto& w : enumerate_motzkin(s))
            words.push_back(std::move(w));
    return words;
}

BatteryResult battery_repoint(const std::vector<std::string>& words) {
    Battery b;
    for (const auto& word : words) {
        const TreeArena t = TreeArena::from_word(word);
        const auto points = all_color_points(t);
        b.check(points.size() == 2 * t.leaf_count() + t.unary_count(),
                word + ": wrong number of color points");
        unsigned bottoms = 0;
        for (const ColorPoint cp : points) {
            const PlainPoint p = repoint(t, cp);
            if (!p)
                ++bottoms;
            const ColorPoint back = repoint_inverse(t, p);
            b.check(back == cp, word + ": repoint not inverted at " + to_debug_string(t, cp));
        }
        b.check(bottoms == 1, word + ": expected exactly one bottom pointing");

        std::vector<PlainPoint> plains{std::nullopt};
        for (const NodeRef v : preorder_nodes(t))
            plains.emplace_back(v);
        for (const PlainPoint p : plains) {
            const ColorPoint cp = repoint_inverse(t, p);
            const PlainPoint back = repoint(t, cp);
            b.check(back == p, word + ": repoint_inverse not inverted");
        }
    }
    return b.result;
}

}  // namespace

BatteryResult battery_repoint_binary(unsigned max_size) {
    return battery_repoint(binary_words_up_to(max_size));
}

BatteryResult battery_repoint_motzkin(unsigned max_size) {
    return battery_repoint(motzkin_words_up_to(max_size));
}

BatteryResult battery_graft_F(unsigned max_size) {
    Battery b;
    // forward, then undo
    for (const auto& word : binary_words_up_to(max_size >= 2 ? max_size - 2 : 0)) {
        const TreeArena base = TreeArena::from_word(word);
        for (const NodeRef v : preorder_nodes(base)) {
            for (const FCase c : {FCase::F1, FCase::F2, FCase::F3, FCase::F4}) {
                TreeArena t = base;
                const ColorPoint cp = graft_F(t, v, c);
                t.validate();
                const NodeRef back = graft_F_inverse(t, cp);
                t.validate();
                b.check(t.to_word() == word && back == v,
                        word + ": F then F^-1 is not the identity");
            }
        }
    }
    // undo, then redo
    for (const auto& word : binary_words_up_to(max_size)) {
        const TreeArena base = TreeArena::from_word(word);
        if (base.size() < 3)
            continue;
        for (const ColorPoint cp : all_color_points(base)) {
            const std::string key = pointed_key(base, cp);
            const FCase c = fcase_of(
                base.child_kind(cp.node) == ChildKind::Left ? Side::Left : Side::Right,
                cp.color);
            TreeArena t = base;
            const NodeRef v = graft_F_inverse(t, cp);
            const ColorPoint cp2 = graft_F(t, v, c);
            t.validate();
            b.check(pointed_key(t, cp2) == key, key + ": F^-1 then F is not the identity");
        }
    }
    return b.result;
}

BatteryResult battery_graft_G(unsigned max_size) {
    Battery b;
    const auto reapply = [](TreeArena& t, const GInverse& gi) {
        if (const ColorPoint* cp = std::get_if<ColorPoint>(&gi.restored))
            return graft_G1(t, *cp);
        const NodeRef v = std::get<NodeRef>(gi.restored);
        return gi.applied == GCase::G2 ? graft_G2(t, v) : graft_G345(t, v, gi.applied);
    };

    // forward, then undo
    for (const auto& word : motzkin_words_up_to(max_size - 1)) {
        const TreeArena base = TreeArena::from_word(word);
        for (const ColorPoint cp : all_color_points(base)) {
            TreeArena t = base;
            const ColorPoint cp2 = graft_G1(t, cp);
            t.validate();
            const GInverse gi = graft_G_inverse(t, cp2);
            t.validate();
            const ColorPoint* restored = std::get_if<ColorPoint>(&gi.restored);
            b.check(gi.applied == GCase::G1 && restored && *restored == cp &&
                        t.to_word() == word,
                    word + ": G1 not inverted");
        }
        for (const NodeRef v : preorder_nodes(base)) {
            TreeArena t = base;
            const ColorPoint cp2 = graft_G2(t, v);
            t.validate();
            const GInverse gi = graft_G_inverse(t, cp2);
            t.validate();
            const NodeRef* restored = std::get_if<NodeRef>(&gi.restored);
            b.check(gi.applied == GCase::G2 && restored && *restored == v &&
                        t.to_word() == word,
                    word + ": G2 not inverted");
        }
    }
    for (const auto& word : motzkin_words_up_to(max_size >= 2 ? max_size - 2 : 0)) {
        const TreeArena base = TreeArena::from_word(word);
        for (const NodeRef v : preorder_nodes(base)) {
            for (const GCase c : {GCase::G3, GCase::G4, GCase::G5}) {
                TreeArena t = base;
                const ColorPoint cp2 = graft_G345(t, v, c);
                t.validate();
                const GInverse gi = graft_G_inverse(t, cp2);
                t.validate();
                const NodeRef* restored = std::get_if<NodeRef>(&gi.restored);
                b.check(gi.applied == c && restored && *restored == v && t.to_word() == word,
                        word + ": G3/G4/G5 not inverted");
            }
        }
    }
    // undo, then redo
    for (const auto& word : motzkin_words_up_to(max_size)) {
        const TreeArena base = TreeArena::from_word(word);
        if (base.size() < 2)
            continue;
        for (const ColorPoint cp : all_color_points(base)) {
            const std::string key = pointed_key(base, cp);
            TreeArena t = base;
            const GInverse gi = graft_G_inverse(t, cp);
            const ColorPoint cp2 = reapply(t, gi);
            t.validate();
            b.check(pointed_key(t, cp2) == key, key + ": G^-1 then G is not the identity");
        }
    }
    return b.result;
}

BatteryResult battery_graft_H(unsigned max_size) {
    Battery b;
    const auto reapply = [](TreeArena& t, const HInverse& hi) {
        return graft_H(t, hi.restored, hi.applied);
    };

    // forward, then undo
    for (const auto& word : motzkin_words_up_to(max_size - 1)) {
        const TreeArena base = TreeArena::from_word(word);
        for (const ColorPoint cp : all_color_points(base)) {
            if (cp.color == Color::Green)
                continue;
            const HCase c = cp.color == Color::Red ? HCase::H1 : HCase::H2;
            TreeArena t = base;
            const ColorPoint cp2 = graft_H(t, HPoint{cp}, c);
            t.validate();
            const HInverse hi = graft_H_inverse(t, cp2);
            t.validate();
            const ColorPoint* restored = std::get_if<ColorPoint>(&hi.restored);
            b.check(hi.applied == c && restored && *restored == cp && t.to_word() == word,
                    word + ": H1/H2 not inverted");
        }
        for (const NodeRef v : preorder_nodes(base)) {
            TreeArena t = base;
            const ColorPoint cp2 = graft_H(t, HPoint{v}, HCase::H3);
            t.validate();
            const HInverse hi = graft_H_inverse(t, cp2);
            t.validate();
            const NodeRef* restored = std::get_if<NodeRef>(&hi.restored);
            b.check(hi.applied == HCase::H3 && restored && *restored == v &&
                        t.to_word() == word,
                    word + ": H3 not inverted");
        }
    }
    for (const auto& word : motzkin_words_up_to(max_size >= 2 ? max_size - 2 : 0)) {
        const TreeArena base = TreeArena::from_word(word);
        for (const NodeRef v : preorder_nodes(base)) {
            for (const HCase c : {HCase::H4, HCase::H5, HCase::H6, HCase::H7}) {
                TreeArena t = base;
                const ColorPoint cp2 = graft_H(t, HPoint{v}, c);
                t.validate();
                const HInverse hi = graft_H_inverse(t, cp2);
                t.validate();
                const NodeRef* restored = std::get_if<NodeRef>(&hi.restored);
                b.check(hi.applied == c && restored && *restored == v && t.to_word() == word,
                        word + ": H4..H7 not inverted");
            }
        }
    }
    // undo, then redo
    for (const auto& word : motzkin_words_up_to(max_size)) {
        const TreeArena base = TreeArena::from_word(word);
        if (base.size() < 2)
            continue;
        for (const ColorPoint cp : all_color_points(base)) {
            const std::string key = pointed_key(base, cp);
            TreeArena t = base;
            const HInverse hi = graft_H_inverse(t, cp);
            const ColorPoint cp2 = reapply(t, hi);
            t.validate();
            b.check(pointed_key(t, cp2) == key, key + ": H^-1 then H is not the identity");
        }
    }
    return b.result;
}

}  // namespace treegen::oracle

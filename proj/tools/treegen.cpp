// Command-line front end: exact-size uniform sampling of binary and
// unary-binary trees, bit-cost benchmarks, and the built-in self tests.

#include "treegen/catalan.hpp"
#include "treegen/motzkin.hpp"
#include "treegen/oracle.hpp"
#include "treegen/weighted.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace treegen;

enum class Family { Binary, Motzkin, Weighted };
enum class Algorithm { Rejection, Efficient, RemyClassic };

struct SampleConfig {
    Family family = Family::Binary;
    Algorithm algorithm = Algorithm::Efficient;
    std::uint64_t size = 0;
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    UnaryWeight weight{1, 0};
    std::string format = "word";
    std::string stats_path;
    unsigned threads = 1;
};

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Family parse_family(const std::string& name) {
    if (name == "binary")
        return Family::Binary;
    if (name == "motzkin")
        return Family::Motzkin;
    if (name == "weighted")
        return Family::Weighted;
    throw Usage("unknown family: " + name);
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "rejection")
        return Algorithm::Rejection;
    if (name == "efficient")
        return Algorithm::Efficient;
    if (name == "remy-classic")
        return Algorithm::RemyClassic;
    throw Usage("unknown algorithm: " + name);
}

std::pair<TreeArena, SampleReport> draw_one(const SampleConfig& cfg, MeteredBitSource& src) {
    switch (cfg.family) {
        case Family::Binary:
            switch (cfg.algorithm) {
                case Algorithm::Rejection: return sample_binary_rejection(cfg.size, src);
                case Algorithm::Efficient: return sample_binary_efficient(cfg.size, src);
                case Algorithm::RemyClassic: return sample_binary_remy_classic(cfg.size, src);
            }
            break;
        case Family::Motzkin:
            return sample_motzkin(cfg.size, src);
        case Family::Weighted:
            return sample_weighted(cfg.size, cfg.weight, src);
    }
    throw std::logic_error("draw_one: unreachable");
}

std::string render(const TreeArena& tree, const std::string& format, std::uint64_t index) {
    if (format == "word")
        return tree.to_word() + "\n";
    if (format == "json")
        return tree.to_json() + "\n";
    if (format == "dot")
        return "// tree " + std::to_string(index) + "\n" + tree.to_dot();
    throw Usage("unknown format: " + format);
}

struct Rendered {
    std::string text;
    SampleReport report;
};

// Samples are independent (per-index derived seeds), so a worker pool splits
// the index range and the output is reassembled in index order.
std::vector<Rendered> run_batch(const SampleConfig& cfg) {
    std::vector<Rendered> out(cfg.count);
    const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            MeteredBitSource src(derive_seed(cfg.seed, i));
            const auto [tree, report] = draw_one(cfg, src);
            out[i] = {render(tree, cfg.format, i), report};
        }
    };
    const unsigned threads = std::max(1u, cfg.threads);
    if (threads == 1 || cfg.count < 2) {
        worker(0, cfg.count);
        return out;
    }
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (cfg.count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        if (begin >= cfg.count)
            break;
        pool.emplace_back(worker, begin, std::min(cfg.count, begin + chunk));
    }
    pool.clear();  // join
    return out;
}

int cmd_sample(const SampleConfig& cfg) {
    // surface configuration problems before any worker thread starts
    if (cfg.format != "word" && cfg.format != "json" && cfg.format != "dot")
        throw Usage("unknown format: " + cfg.format);
    if (cfg.family == Family::Weighted) {
        try {
            make_branch_plan(cfg.weight);
        } catch (const std::invalid_argument& e) {
            throw Usage(e.what());
        }
    }

    const auto samples = run_batch(cfg);
    for (const auto& s : samples)
        std::cout << s.text;
    if (!cfg.stats_path.empty()) {
        std::ofstream stats(cfg.stats_path);
        if (!stats)
            throw std::runtime_error("cannot open stats file: " + cfg.stats_path);
        stats << "index,size,bits,restarts,time_ns\n";
        for (std::uint64_t i = 0; i < samples.size(); ++i) {
            const SampleReport& r = samples[i].report;
            stats << i << ',' << r.size << ',' << r.bits_consumed << ',' << r.restarts
                  << ',' << r.wall_time.count() << '\n';
        }
    }
    return 0;
}

int cmd_bench(const SampleConfig& base, const std::vector<std::uint64_t>& sizes) {
    std::cout << "family,algorithm,size,count,mean_bits,excess_bits,mean_time_ns,nodes_per_sec\n";
    const auto run = [&](SampleConfig cfg, const char* family, const char* algorithm) {
        double bits = 0, time_ns = 0;
        std::uint64_t nodes = 0;
        for (std::uint64_t i = 0; i < cfg.count; ++i) {
            MeteredBitSource src(derive_seed(cfg.seed, i));
            const auto [tree, report] = draw_one(cfg, src);
            bits += static_cast<double>(report.bits_consumed);
            time_ns += static_cast<double>(report.wall_time.count());
            nodes += tree.size();
        }
        const double count = static_cast<double>(cfg.count);
        const double mean_bits = bits / count;
        // entropy proxy: 2n for binary, size * log2(3) otherwise
        const double proxy = cfg.family == Family::Binary
                                 ? 2.0 * static_cast<double>(cfg.size)
                                 : static_cast<double>(cfg.size) * std::log2(3.0);
        const double mean_time = time_ns / count;
        const double rate = mean_time > 0
                                ? static_cast<double>(nodes) / count / (mean_time * 1e-9)
                                : 0.0;
        std::cout << family << ',' << algorithm << ',' << cfg.size << ',' << cfg.count
                  << ',' << mean_bits << ',' << mean_bits - proxy << ',' << mean_time
                  << ',' << rate << '\n';
    };

    for (const std::uint64_t size : sizes) {
        SampleConfig cfg = base;
        cfg.size = size;
        switch (cfg.family) {
            case Family::Binary:
                cfg.algorithm = Algorithm::Efficient;
                run(cfg, "binary", "efficient");
                cfg.algorithm = Algorithm::RemyClassic;
                run(cfg, "binary", "remy-classic");
                break;
            case Family::Motzkin:
                run(cfg, "motzkin", "grow");
                break;
            case Family::Weighted:
                run(cfg, "weighted", "grow");
                break;
        }
    }
    return 0;
}

int cmd_selftest(const std::string& level, std::uint64_t seed) {
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty())
            std::cout << " (" << detail << ")";
        std::cout << '\n';
        if (!ok)
            ++failures;
    };

    const auto battery = [&](const std::string& name, const oracle::BatteryResult& r) {
        report(name, r.ok(), std::to_string(r.checks) + " checks");
        for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i)
            std::cout << "       " << r.failures[i] << '\n';
    };

    battery("repoint bijection, binary trees to size 11", oracle::battery_repoint_binary(11));
    battery("repoint bijection, unary-binary trees to size 9",
            oracle::battery_repoint_motzkin(9));
    battery("binary graft round trips to size 11", oracle::battery_graft_F(11));
    battery("unary-binary graft round trips to size 8", oracle::battery_graft_G(8));
    battery("weighted graft round trips to size 6", oracle::battery_graft_H(6));

    {
        bool ok = true;
        std::uint64_t checks = 0;
        for (unsigned n = 0; n <= 3 && ok; ++n) {
            const auto audit = oracle::audit_binary_try(n, true);
            const oracle::BigRational expected(oracle::BigInt(1),
                                               oracle::BigInt(1) << (2 * n + 1));
            ok = oracle::BigInt(audit.reach.size()) ==
                 (2 * n + 2) * oracle::count_binary(n);
            for (const auto& [key, prob] : audit.reach) {
                ok = ok && prob == expected;
                ++checks;
            }
        }
        report("binary reach probabilities are exactly 1/(2*4^n), n <= 3", ok,
               std::to_string(checks) + " pointed trees");
    }
    {
        bool ok = true;
        std::uint64_t checks = 0;
        for (unsigned n = 1; n <= 4 && ok; ++n) {
            const auto audit = oracle::audit_motzkin_try(n);
            oracle::BigInt power = 1;
            for (unsigned k = 1; k < n; ++k)
                power *= 3;
            const oracle::BigRational expected(oracle::BigInt(1), 2 * power);
            ok = oracle::BigInt(audit.reach.size()) == (n + 1) * oracle::count_motzkin(n);
            for (const auto& [key, prob] : audit.reach) {
                ok = ok && prob == expected;
                ++checks;
            }
        }
        report("unary-binary reach probabilities are exactly 1/(2*3^(n-1)), n <= 4", ok,
               std::to_string(checks) + " pointed trees");
    }
    {
        bool ok = true;
        std::uint64_t checks = 0;
        for (unsigned n = 1; n <= 3 && ok; ++n) {
            const auto audit = oracle::audit_binary_efficient(n);
            const oracle::BigInt pointed = (2 * n + 2) * oracle::count_binary(n);
            const oracle::BigRational expected =
                oracle::BigRational(1) / oracle::BigRational(pointed);
            ok = oracle::BigInt(audit.reach.size()) == pointed && audit.success_mass == 1;
            for (const auto& [key, prob] : audit.reach) {
                ok = ok && prob == expected;
                ++checks;
            }
        }
        report("efficient sampler stays uniform over pointed trees at each step, n <= 3",
               ok, std::to_string(checks) + " pointed trees");
    }
    {
        bool ok = true;
        std::uint64_t checks = 0;
        const BranchPlan plan = make_branch_plan({2, 0}, 8);
        const oracle::BigRational u(2), c(oracle::BigInt(plan.c_numerator),
                                         oracle::BigInt(1) << plan.c_exponent);
        for (unsigned n = 1; n <= 4 && ok; ++n) {
            const auto audit = oracle::audit_weighted_try(n, plan);
            for (const auto& [key, prob] : audit.reach) {
                const std::string word = key.substr(0, key.find('|'));
                oracle::BigRational expected(1, 2);
                for (char ch : word)
                    if (ch == 'U')
                        expected *= u;
                for (unsigned s = 1; s < n; ++s)
                    expected *= c;
                ok = ok && prob == expected;
                ++checks;
            }
        }
        report("weighted reach probabilities factor as u^k c^(n-1)/2, n <= 4", ok,
               std::to_string(checks) + " pointed trees");
    }

    if (level == "full") {
        const auto chi = [&](const std::string& name, auto&& sampler,
                             const std::vector<std::string>& classes) {
            auto table = oracle::TreeClassTable::uniform(classes);
            for (int i = 0; i < 100000; ++i)
                table.record(sampler(i));
            const auto res = oracle::chi_square_test(table, 0.001);
            std::ostringstream detail;
            detail << "statistic " << res.statistic << " vs " << res.threshold;
            report(name, res.pass, detail.str());
        };
        for (unsigned n : {3u, 4u, 5u}) {
            const auto classes = oracle::enumerate_binary(n);
            chi("chi-square, binary rejection sampler, n=" + std::to_string(n),
                [&](int i) {
                    MeteredBitSource src(derive_seed(seed ^ 0x10, i));
                    return sample_binary_rejection(n, src).first.to_word();
                },
                classes);
            chi("chi-square, binary efficient sampler, n=" + std::to_string(n),
                [&](int i) {
                    MeteredBitSource src(derive_seed(seed ^ 0x20, i));
                    return sample_binary_efficient(n, src).first.to_word();
                },
                classes);
            chi("chi-square, classic growth baseline, n=" + std::to_string(n),
                [&](int i) {
                    MeteredBitSource src(derive_seed(seed ^ 0x30, i));
                    return sample_binary_remy_classic(n, src).first.to_word();
                },
                classes);
        }
        for (unsigned size : {5u, 6u, 7u}) {
            chi("chi-square, unary-binary sampler, size=" + std::to_string(size),
                [&](int i) {
                    MeteredBitSource src(derive_seed(seed ^ 0x40, i));
                    return sample_motzkin(size, src).first.to_word();
                },
                oracle::enumerate_motzkin(size));
        }
    }

    std::cout << (failures == 0 ? "all checks passed" : "checks FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    CLI::App app{"exact-size random sampling of plane binary and unary-binary trees"};
    app.require_subcommand(1);

    std::string family = "binary";
    std::string algorithm;
    std::string weight;
    std::string format = "word";
    std::string stats_path;
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    auto* sample = app.add_subcommand("sample", "draw trees and print them");
    std::uint64_t sample_size = 0;
    sample->add_option("--family", family, "binary | motzkin | weighted");
    sample->add_option("--size", sample_size,
                       "internal nodes for binary (tree has 2n+1 nodes); node count otherwise")
        ->required();
    sample->add_option("--count", count, "number of trees");
    sample->add_option("--seed", seed, "base seed; sample i uses a seed derived from (seed, i)");
    sample->add_option("--algorithm", algorithm, "binary only: rejection | efficient | remy-classic");
    sample->add_option("--weight", weight, "weighted only: unary weight as \"a\" or \"a/2^k\"");
    sample->add_option("--format", format, "word | json | dot");
    sample->add_option("--stats", stats_path, "write per-sample CSV: index,size,bits,restarts,time_ns");
    sample->add_option("--threads", threads, "worker threads; output order is unaffected");

    auto* bench = app.add_subcommand("bench", "bit cost and throughput per size, CSV on stdout");
    std::vector<std::uint64_t> bench_sizes;
    bench->add_option("--family", family, "binary | motzkin | weighted");
    bench->add_option("--size", bench_sizes, "comma-separated list of sizes")
        ->required()
        ->delimiter(',');
    bench->add_option("--count", count, "samples per size");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--weight", weight, "weighted only: unary weight");

    auto* selftest = app.add_subcommand("selftest", "run the built-in correctness checks");
    std::string level = "quick";
    selftest->add_option("--level", level, "quick | full");
    selftest->add_option("--seed", seed, "seed for the statistical suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        SampleConfig cfg;
        cfg.family = parse_family(family);
        cfg.count = count;
        cfg.seed = seed;
        cfg.format = format;
        cfg.stats_path = stats_path;
        cfg.threads = threads;

        if (!algorithm.empty() && cfg.family != Family::Binary)
            throw Usage("--algorithm applies to the binary family only");
        if (!algorithm.empty())
            cfg.algorithm = parse_algorithm(algorithm);
        if (!weight.empty() && cfg.family != Family::Weighted)
            throw Usage("--weight applies to the weighted family only");
        if (cfg.family == Family::Weighted) {
            if (weight.empty())
                throw Usage("the weighted family needs --weight");
            try {
                cfg.weight = parse_unary_weight(weight);
            } catch (const std::invalid_argument& e) {
                throw Usage(e.what());
            }
        }

        const auto check_size = [&](std::uint64_t size) {
            if (cfg.family != Family::Binary && size == 0)
                throw Usage("--size must be at least 1 for this family");
            if (cfg.family == Family::Weighted && size > 64)
                throw Usage("weighted sampling is capped at size 64 "
                            "(expected cost grows exponentially)");
            const std::uint64_t nodes =
                cfg.family == Family::Binary ? 2 * size + 1 : size + 1;
            if (size > TreeArena::max_nodes || nodes > TreeArena::max_nodes)
                throw Usage("--size exceeds the 32-bit node index space");
        };

        if (sample->parsed()) {
            cfg.size = sample_size;
            check_size(cfg.size);
            return cmd_sample(cfg);
        }
        if (bench->parsed()) {
            for (const auto s : bench_sizes)
                check_size(s);
            return cmd_bench(cfg, bench_sizes);
        }
        if (selftest->parsed()) {
            if (level != "quick" && level != "full")
                throw Usage("--level must be quick or full");
            return cmd_selftest(level, seed);
        }
        return 2;
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

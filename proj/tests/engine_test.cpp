#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "causalmine/engine.hpp"
#include "causalmine/report_io.hpp"
#include "causalmine/synthetic.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace causalmine;

namespace {

MiningConfig small_config(std::uint64_t seed) {
    MiningConfig cfg;
    cfg.min_local_support = 0.05;
    cfg.max_rule_length = 2;
    cfg.confidence = Confidence::pct99;
    cfg.runs = 3;
    cfg.consensus_min = 2;
    cfg.seed = seed;
    cfg.threads = 1;
    return cfg;
}

std::set<RuleKey> key_set(const MiningReport& r) {
    std::set<RuleKey> out;
    for (const ReportRule& rr : r.rules) out.insert(key_of(rr.stats.rule));
    return out;
}

}  // namespace

TEST_CASE("config validation") {
    MiningConfig cfg;
    cfg.min_local_support = 0.0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = {};
    cfg.consensus_min = 4;  // > runs
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = {};
    cfg.max_rule_length = 0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = {};
    cfg.matcher = {MatcherKind::jaccard, 1.5};
    CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("mining refuses a constant response") {
    const int n = 50;
    RecordBits x(n), z(n, true);
    std::vector<Item> items{{0, "x", "x"}, {1, "Z", "Z"}};
    const Dataset d(std::move(items), {std::move(x), std::move(z)}, 1);
    CHECK_THROWS_AS(mine(d, MiningConfig{}), input_error);
}

TEST_CASE("planted direct causes reach the consensus output") {
    const SyntheticData sd = generate_logistic(10, 2000, 3, 2.0, 3.0, 11);
    for (std::uint64_t seed : {1, 2, 3}) {
        const MiningReport report = mine(sd.dataset, small_config(seed));
        std::set<std::string> found;
        for (const ReportRule& rr : report.rules)
            if (rr.stats.rule.lhs.size() == 1)
                found.insert(sd.dataset.item(rr.stats.rule.lhs[0]).name);
        for (const std::string& cause : sd.truth.single_causes)
            CHECK(found.count(cause) == 1);
    }
}

TEST_CASE("max rule length 1 yields only single-item rules") {
    const SyntheticData sd = generate_logistic(8, 1000, 2, 2.0, 3.0, 4);
    MiningConfig cfg = small_config(5);
    cfg.max_rule_length = 1;
    const MiningReport report = mine(sd.dataset, cfg);
    for (const ReportRule& rr : report.rules) CHECK(rr.stats.rule.lhs.size() == 1);
}

TEST_CASE("specialisations of a causal rule never appear") {
    const SyntheticData sd = generate_logistic(8, 2000, 2, 2.5, 3.0, 21);
    MiningConfig cfg = small_config(9);
    cfg.max_rule_length = 3;
    const MiningReport report = mine(sd.dataset, cfg);

    for (int r = 0; r < cfg.runs; ++r) {
        const auto& keys = report.per_run_keys[r];
        for (const RuleKey& shorter : keys)
            for (const RuleKey& longer : keys)
                if (shorter.lhs.size() < longer.lhs.size())
                    CHECK_FALSE(testutil::is_proper_subset(shorter.lhs, longer.lhs));
    }
}

TEST_CASE("every reported rule passed the association test first") {
    const SyntheticData sd = generate_logistic(10, 1500, 3, 1.5, 2.5, 33);
    const MiningReport report = mine(sd.dataset, small_config(2));
    for (const ReportRule& rr : report.rules) {
        CHECK(rr.stats.rule.significant);
        CHECK(static_cast<int>(rr.runs.size()) >= report.config.consensus_min);
        CHECK(rr.stats.causal);
    }
}

TEST_CASE("consensus set arithmetic") {
    const RuleKey a{{1}, Target::z};
    const RuleKey b{{2}, Target::z};
    CHECK(consensus({{a}, {a}, {b}}, 2) == std::vector<RuleKey>{a});
    CHECK(consensus({{a, b}, {a, b}, {a, b}}, 3) == std::vector<RuleKey>{a, b});
    CHECK(consensus({{a}, {b}}, 1) == std::vector<RuleKey>{a, b});
    CHECK(consensus({{}, {}, {}}, 1).empty());
}

TEST_CASE("reports are deterministic, including under threads") {
    const SyntheticData sd = generate_logistic(10, 1200, 3, 1.5, 2.5, 55);
    MiningConfig cfg = small_config(7);
    const MiningReport r1 = mine(sd.dataset, cfg);
    const MiningReport r2 = mine(sd.dataset, cfg);
    cfg.threads = 2;
    const MiningReport r4 = mine(sd.dataset, cfg);

    const auto dump = [&](const MiningReport& r) {
        std::ostringstream out;
        write_jsonl(r, sd.dataset, out);
        return out.str();
    };
    CHECK(dump(r1) == dump(r2));
    CHECK(dump(r1) == dump(r4));
    CHECK(r1.per_run_keys == r2.per_run_keys);
    CHECK(r1.per_run_keys == r4.per_run_keys);
}

TEST_CASE("threshold mode bypasses the interval tests") {
    const SyntheticData sd = generate_logistic(8, 800, 2, 2.0, 3.0, 71);
    MiningConfig cfg = small_config(3);
    cfg.min_oratio = 1.5;
    const MiningReport report = mine(sd.dataset, cfg);
    CHECK(!report.rules.empty());
    for (const ReportRule& rr : report.rules) {
        CHECK(rr.stats.rule.odds_ratio > 1.5);
        CHECK(rr.stats.fair_or > 1.5);
    }
}

TEST_CASE("pruned mining equals the naive pipeline minus redundant rules") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        // BN data gives correlated items and real causes, exercising both
        // redundancy cuts
        const SyntheticData sd = generate_bn(8, 400, 3, seed);
        MiningConfig cfg;
        cfg.min_local_support = 0.05;
        cfg.max_rule_length = 3;
        cfg.confidence = Confidence::pct95;
        cfg.runs = 1;
        cfg.consensus_min = 1;
        cfg.seed = seed * 31;
        cfg.threads = 1;

        const MiningReport pruned = mine(sd.dataset, cfg);
        const auto naive =
            testutil::naive_pipeline(sd.dataset, cfg, run_seed(cfg.seed, 0));

        const std::set<RuleKey> pruned_keys = key_set(pruned);
        std::set<RuleKey> expected;
        for (const auto& o : naive) {
            if (!o.tested.causal) continue;
            const RuleKey key = key_of(o.tested.rule);
            bool redundant = testutil::equal_support_redundant(sd.dataset, key.lhs);
            if (!redundant)
                for (const RuleKey& c : pruned_keys)
                    if (testutil::is_proper_subset(c.lhs, key.lhs)) {
                        redundant = true;
                        break;
                    }
            if (!redundant) expected.insert(key);
        }
        CHECK(pruned_keys == expected);
    }
}

TEST_CASE("disabling pruning makes the engine match the oracle exactly") {
    for (std::uint64_t seed : {5, 6}) {
        const SyntheticData sd = generate_bn(7, 300, 2, seed);
        MiningConfig cfg;
        cfg.min_local_support = 0.05;
        cfg.max_rule_length = 2;
        cfg.confidence = Confidence::pct95;
        cfg.runs = 1;
        cfg.consensus_min = 1;
        cfg.seed = 77;
        cfg.threads = 1;
        cfg.prune = false;

        const MiningReport unpruned = mine(sd.dataset, cfg);
        const auto naive =
            testutil::naive_pipeline(sd.dataset, cfg, run_seed(cfg.seed, 0));
        std::set<RuleKey> naive_causal;
        for (const auto& o : naive)
            if (o.tested.causal) naive_causal.insert(key_of(o.tested.rule));
        CHECK(key_set(unpruned) == naive_causal);
    }
}

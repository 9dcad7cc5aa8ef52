#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "causalmine/cohort.hpp"
#include "causalmine/dataset.hpp"
#include "causalmine/errors.hpp"
#include "causalmine/miner.hpp"
#include "causalmine/prefix_tree.hpp"

namespace causalmine {

struct MiningConfig {
    double min_local_support = 0.05;
    int max_rule_length = 4;
    Confidence confidence = Confidence::pct95;
    // when set, replaces both interval tests by plain odds-ratio thresholds
    std::optional<double> min_oratio;
    Matcher matcher;
    int runs = 3;
    int consensus_min = 2;
    // exclusivity cutoff; defaults to floor(min_local_support * n_records)
    std::optional<std::uint64_t> epsilon;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    bool prune = true;

    void validate() const {
        if (!(min_local_support > 0.0 && min_local_support < 1.0))
            throw config_error("min local support must be in (0,1)");
        if (max_rule_length < 1) throw config_error("max rule length must be >= 1");
        if (runs < 1) throw config_error("runs must be >= 1");
        if (consensus_min < 1 || consensus_min > runs)
            throw config_error("consensus threshold must be in [1, runs]");
        if (matcher.kind == MatcherKind::jaccard &&
            !(matcher.theta > 0.0 && matcher.theta <= 1.0))
            throw config_error("jaccard theta must be in (0,1]");
        if (min_oratio && *min_oratio <= 0) throw config_error("min odds ratio must be > 0");
    }
};

/// Rule identity across runs: the LHS item set plus the target value.
struct RuleKey {
    Pattern lhs;
    Target target = Target::z;

    bool operator==(const RuleKey&) const = default;
    bool operator<(const RuleKey& o) const {
        if (lhs.size() != o.lhs.size()) return lhs.size() < o.lhs.size();
        if (lhs != o.lhs) return lhs < o.lhs;
        return target < o.target;
    }
};

inline RuleKey key_of(const AssociationRule& r) { return {r.lhs, r.target}; }

inline std::uint64_t key_hash(const RuleKey& k) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL ^ k.lhs.size();
    for (ItemId id : k.lhs) h = splitmix64(h ^ id);
    return splitmix64(h ^ (k.target == Target::z ? 0x5a : 0xa5));
}

/// Seed of the matching RNG for one rule in one run. Exposed so independent
/// re-implementations can replay a run rule by rule.
inline std::uint64_t rule_seed(std::uint64_t run_seed, const RuleKey& k) {
    return mix_seed(run_seed, key_hash(k));
}

inline std::uint64_t run_seed(std::uint64_t master_seed, int run) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(run));
}

/// One consensus rule: statistics come from the run with the median fair
/// odds ratio among the runs that produced the rule.
struct ReportRule {
    CausalRule stats;
    std::vector<int> runs;
};

struct MiningReport {
    std::vector<ReportRule> rules;                   // consensus set, canonical order
    std::vector<std::vector<RuleKey>> per_run_keys;  // full causal set per run
    std::vector<std::vector<LevelStats>> per_run_levels;
    std::vector<ItemId> universe;                    // frequent 1-items
    std::map<std::string, double> timings_sec;
    MiningConfig config;
};

/// Rule keys present in at least min_count of the given per-run sets.
inline std::vector<RuleKey> consensus(const std::vector<std::vector<RuleKey>>& rule_sets,
                                      int min_count) {
    std::map<RuleKey, int> counts;
    for (const auto& set : rule_sets)
        for (const RuleKey& k : set) ++counts[k];
    std::vector<RuleKey> out;
    for (const auto& [k, c] : counts)
        if (c >= min_count) out.push_back(k);
    return out;
}

namespace detail {

/// Runs fn(0..n-1) on up to `threads` workers. Results must be written to
/// pre-sized slots so scheduling cannot change anything observable.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct RunResult {
    std::vector<CausalRule> causal;
    std::vector<LevelStats> levels;
    std::vector<ItemId> universe;
};

inline RunResult run_once(const Dataset& d, const MiningConfig& cfg,
                          std::span<const ItemId> irrelevant, std::uint64_t epsilon,
                          std::uint64_t seed) {
    RunResult out;
    PrefixTree tree(d, cfg.min_local_support, cfg.prune);
    out.levels.push_back(tree.build_level1());
    out.universe = tree.frequent_items();

    const SignificanceTest sig_test{cfg.confidence, cfg.min_oratio};
    const CausalCriterion criterion{cfg.confidence, cfg.min_oratio};

    for (int k = 1; k <= cfg.max_rule_length; ++k) {
        std::vector<AssociationRule> rules = rules_at_level(tree, k, sig_test);
        std::vector<CausalRule> tested(rules.size());
        parallel_for(rules.size(), cfg.threads, [&](std::size_t i) {
            tested[i] = test_causal(d, rules[i], out.universe, irrelevant, epsilon,
                                    criterion, cfg.matcher,
                                    rule_seed(seed, key_of(rules[i])));
        });

        LevelStats& st = out.levels.back();
        st.rules_tested = rules.size();
        for (CausalRule& cr : tested) {
            if (!cr.causal) continue;
            ++st.causal_found;
            if (cfg.prune) tree.remove_pattern(cr.rule.lhs);
            out.causal.push_back(std::move(cr));
        }
        if (k < cfg.max_rule_length) out.levels.push_back(tree.extend_level(k + 1));
    }
    return out;
}

}  // namespace detail

/// Level-wise causal rule mining: candidate generation with support and
/// redundancy cuts, association significance, and a matched-pair cohort test
/// per surviving rule; repeated over independently seeded runs, keeping the
/// rules found often enough.
inline MiningReport mine(const Dataset& d, const MiningConfig& cfg) {
    cfg.validate();
    if (d.response_support(Target::z) == 0 || d.response_support(Target::not_z) == 0)
        throw input_error("response variable is constant; nothing to mine");

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto secs = [](auto a, auto b) {
        return std::chrono::duration<double>(b - a).count();
    };

    MiningReport report;
    report.config = cfg;
    const std::uint64_t epsilon = cfg.epsilon.value_or(static_cast<std::uint64_t>(
        std::floor(cfg.min_local_support * static_cast<double>(d.n_records()))));

    const std::vector<ItemId> irrelevant = find_irrelevant(d, cfg.confidence);
    const auto t1 = clock::now();
    report.timings_sec["screen_irrelevant"] = secs(t0, t1);

    std::vector<detail::RunResult> runs(cfg.runs);
    for (int r = 0; r < cfg.runs; ++r) {
        const auto rs = clock::now();
        runs[r] = detail::run_once(d, cfg, irrelevant, epsilon,
                                   run_seed(cfg.seed, r));
        report.timings_sec["run" + std::to_string(r)] = secs(rs, clock::now());
    }
    report.universe = runs.front().universe;

    for (const auto& run : runs) {
        std::vector<RuleKey> keys;
        keys.reserve(run.causal.size());
        for (const CausalRule& cr : run.causal) keys.push_back(key_of(cr.rule));
        report.per_run_keys.push_back(std::move(keys));
        report.per_run_levels.push_back(run.levels);
    }

    // consensus; per-rule statistics from the run with the median fair OR
    std::map<RuleKey, std::vector<std::pair<int, const CausalRule*>>> by_key;
    for (int r = 0; r < cfg.runs; ++r)
        for (const CausalRule& cr : runs[r].causal)
            by_key[key_of(cr.rule)].emplace_back(r, &cr);

    for (auto& [key, found] : by_key) {
        if (static_cast<int>(found.size()) < cfg.consensus_min) continue;
        auto median = found;
        std::sort(median.begin(), median.end(), [](const auto& x, const auto& y) {
            return x.second->fair_or < y.second->fair_or;
        });
        ReportRule rr;
        rr.stats = *median[(median.size() - 1) / 2].second;
        for (const auto& [r, cr] : found) rr.runs.push_back(r);
        report.rules.push_back(std::move(rr));
    }
    // by_key is ordered by RuleKey, so report.rules is already canonical:
    // shorter LHS first, then lexicographic, then target

    report.timings_sec["total"] = secs(t0, clock::now());
    return report;
}

}  // namespace causalmine

#pragma once

// Brute-force reference pipeline for equivalence testing: enumerates every
// frequent pattern by per-record scanning (no prefix tree, no bitset
// intersection path, no redundancy cuts), then association-tests and
// cohort-tests each one with the same per-rule seeds the engine derives.

#include <cstdint>
#include <vector>

#include "causalmine/cohort.hpp"
#include "causalmine/engine.hpp"
#include "causalmine/miner.hpp"

namespace testutil {

using namespace causalmine;

/// (supp(p, z), supp(p)) by scanning records one by one.
inline std::pair<std::uint64_t, std::uint64_t> scan_support(const Dataset& d,
                                                            const Pattern& p) {
    std::uint64_t count_z = 0, count_any = 0;
    for (RecordId r = 0; r < d.n_records(); ++r) {
        bool all = true;
        for (ItemId id : p)
            if (!d.column(id).test(r)) {
                all = false;
                break;
            }
        if (!all) continue;
        ++count_any;
        if (d.response_column().test(r)) ++count_z;
    }
    return {count_z, count_any};
}

inline bool scan_frequent(const Dataset& d, double delta, std::uint64_t count_z,
                          std::uint64_t count_any) {
    const auto sz = static_cast<double>(d.response_support(Target::z));
    const auto snz = static_cast<double>(d.response_support(Target::not_z));
    const auto cz = static_cast<double>(count_z);
    const auto cnz = static_cast<double>(count_any - count_z);
    return cz > delta * sz || cnz > delta * snz;
}

/// Every frequent pattern of length <= max_len, depth-first ascending.
inline std::vector<Pattern> enumerate_frequent(const Dataset& d, double delta,
                                               int max_len) {
    std::vector<Pattern> out;
    Pattern current;
    const auto recurse = [&](auto&& self, ItemId from) -> void {
        if (static_cast<int>(current.size()) == max_len) return;
        for (ItemId id = from; id < d.n_items(); ++id) {
            if (id == d.response()) continue;
            current.push_back(id);
            const auto [cz, ca] = scan_support(d, current);
            if (scan_frequent(d, delta, cz, ca)) {
                out.push_back(current);
                self(self, id + 1);
            }
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

struct OracleRule {
    CausalRule tested;
};

/// The full unpruned pipeline for one run: association-significant rules of
/// every frequent pattern, each cohort-tested with the engine's seed scheme.
inline std::vector<OracleRule> naive_pipeline(const Dataset& d, const MiningConfig& cfg,
                                              std::uint64_t one_run_seed) {
    const SignificanceTest sig{cfg.confidence, cfg.min_oratio};
    const CausalCriterion crit{cfg.confidence, cfg.min_oratio};
    const std::uint64_t eps = cfg.epsilon.value_or(static_cast<std::uint64_t>(
        std::floor(cfg.min_local_support * static_cast<double>(d.n_records()))));

    // mining universe: frequent 1-items
    std::vector<ItemId> universe;
    for (ItemId id : d.predictors()) {
        const auto [cz, ca] = scan_support(d, {id});
        if (scan_frequent(d, cfg.min_local_support, cz, ca)) universe.push_back(id);
    }
    const std::vector<ItemId> irrelevant = find_irrelevant(d, cfg.confidence);

    std::vector<OracleRule> out;
    for (const Pattern& p : enumerate_frequent(d, cfg.min_local_support,
                                               cfg.max_rule_length)) {
        const auto [cz, ca] = scan_support(d, p);
        for (const Target t : {Target::z, Target::not_z}) {
            AssociationRule rule = make_rule(d, p, t, cz, ca, sig);
            if (!rule.significant) continue;
            const CausalRule tested =
                test_causal(d, rule, universe, irrelevant, eps, crit, cfg.matcher,
                            rule_seed(one_run_seed, key_of(rule)));
            out.push_back({tested});
        }
    }
    return out;
}

inline bool is_proper_subset(const Pattern& small, const Pattern& big) {
    return small.size() < big.size() &&
           std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Redundancy by equal-support specialisation: some proper subset of the
/// pattern covers exactly the same records.
inline bool equal_support_redundant(const Dataset& d, const Pattern& p) {
    if (p.size() < 2) return false;
    const std::uint64_t supp = scan_support(d, p).second;
    const std::uint64_t subsets = (std::uint64_t{1} << p.size()) - 1;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        Pattern q;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) q.push_back(p[i]);
        if (scan_support(d, q).second == supp) return true;
    }
    return false;
}

}  // namespace testutil

#pragma once

#include <algorithm>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causalmine/dataset.hpp"
#include "causalmine/miner.hpp"
#include "causalmine/rng.hpp"
#include "causalmine/stats.hpp"

namespace causalmine {

enum class MatcherKind { exact, jaccard };

struct Matcher {
    MatcherKind kind = MatcherKind::exact;
    double theta = 0.9;  // Jaccard only: records match when distance <= 1 - theta
};

/// Control variables for one exposure: every candidate predictor that is
/// neither part of the exposure, irrelevant to the response, nor exclusive
/// with the exposure.
struct ControlSet {
    Pattern exposure;
    std::vector<ItemId> controls;
    std::vector<ItemId> excluded_irrelevant;
    std::vector<ItemId> excluded_exclusive;
};

/// Matched record pairs for one rule. Pair order follows the iteration order
/// of the smaller cohort; each record id appears at most once.
struct FairDataset {
    std::vector<std::pair<RecordId, RecordId>> pairs;  // (exposed, non-exposed)
    MatchedPairTable table;
    std::uint64_t rng_seed = 0;
};

/// Association rule plus the outcome of its cohort test.
struct CausalRule {
    AssociationRule rule;
    MatchedPairTable pair_table;
    std::uint64_t n_pairs = 0;
    double fair_or = 1.0;
    Interval fair_ci;
    bool causal = false;
    bool untestable = false;  // no matched pair could be formed
};

/// Causal criterion on the matched-pair table: interval test by default,
/// plain threshold when min_oratio is set. An empty fair data set never
/// passes.
struct CausalCriterion {
    Confidence confidence = Confidence::pct95;
    std::optional<double> min_oratio;

    bool passes(const MatchedPairTable& t) const {
        if (t.pairs() == 0) return false;
        if (min_oratio) return fair_odds_ratio(t) > *min_oratio;
        return matched_ci(t, confidence).low > 1.0;
    }
};

/// Predictors with no significant two-sided association with the response.
/// Constant items are degenerate tables and count as irrelevant.
inline std::vector<ItemId> find_irrelevant(const Dataset& d, Confidence conf) {
    std::vector<ItemId> out;
    for (ItemId y : d.predictors()) {
        const std::uint64_t supp = d.column(y).count();
        if (supp == 0 || supp == d.n_records()) {
            out.push_back(y);
            continue;
        }
        const std::uint64_t a = d.column(y).and_count(d.response_column());
        const ContingencyTable t = contingency(d, a, supp, Target::z);
        if (!associated_two_sided(t, conf)) out.push_back(y);
    }
    return out;
}

/// Items that (almost) never co-occur with the exposure or with its absence;
/// controlling them would empty one cohort.
inline std::vector<ItemId> find_exclusive(const Dataset& d, const Pattern& exposure,
                                          std::uint64_t epsilon) {
    const RecordBits mask = d.covering_mask(exposure);
    std::vector<ItemId> out;
    for (ItemId q : d.predictors()) {
        if (std::find(exposure.begin(), exposure.end(), q) != exposure.end()) continue;
        const std::uint64_t with = mask.and_count(d.column(q));
        const std::uint64_t without = d.column(q).count() - with;
        if (with <= epsilon || without <= epsilon) out.push_back(q);
    }
    return out;
}

/// Partitions the candidate items into controls and the two excluded sets.
/// `universe` is the pool control variables may come from (the frequent
/// 1-items during mining; all predictors by default).
inline ControlSet build_control_set(const Dataset& d, const Pattern& exposure,
                                    std::span<const ItemId> universe,
                                    std::span<const ItemId> irrelevant,
                                    std::uint64_t epsilon) {
    const std::vector<ItemId> exclusive = find_exclusive(d, exposure, epsilon);
    const auto in = [](std::span<const ItemId> set, ItemId id) {
        return std::find(set.begin(), set.end(), id) != set.end();
    };
    ControlSet cs;
    cs.exposure = exposure;
    for (ItemId id : universe) {
        if (in(exposure, id)) continue;
        if (in(irrelevant, id))
            cs.excluded_irrelevant.push_back(id);
        else if (in(exclusive, id))
            cs.excluded_exclusive.push_back(id);
        else
            cs.controls.push_back(id);
    }
    return cs;
}

namespace detail {

/// Per-record control-item values, packed so signatures hash and compare as
/// flat byte strings and Jaccard terms are popcounts.
class SignatureTable {
public:
    SignatureTable(const Dataset& d, std::span<const ItemId> controls)
        : words_((controls.size() + 63) / 64), n_(d.n_records()) {
        bits_.assign(words_ * n_, 0);
        for (std::size_t j = 0; j < controls.size(); ++j) {
            const RecordBits& col = d.column(controls[j]);
            const std::uint64_t word_bit = std::uint64_t{1} << (j & 63);
            const std::size_t word = j >> 6;
            for (RecordId r : col.to_indices()) bits_[r * words_ + word] |= word_bit;
        }
    }

    std::string key(RecordId r) const {
        if (words_ == 0) return {};
        return std::string(reinterpret_cast<const char*>(&bits_[r * words_]),
                           words_ * sizeof(std::uint64_t));
    }

    /// (|u & v|, |u | v|) over the control bits of two records.
    std::pair<std::uint64_t, std::uint64_t> overlap(RecordId a, RecordId b) const {
        std::uint64_t inter = 0, uni = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t x = bits_[a * words_ + w];
            const std::uint64_t y = bits_[b * words_ + w];
            inter += std::popcount(x & y);
            uni += std::popcount(x | y);
        }
        return {inter, uni};
    }

private:
    std::size_t words_;
    std::size_t n_;
    std::vector<std::uint64_t> bits_;
};

inline RecordId pick(std::vector<RecordId>& candidates, Rng& rng) {
    const std::size_t at = candidates.size() == 1 ? 0 : rng.index(candidates.size());
    const RecordId chosen = candidates[at];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(at));
    return chosen;
}

}  // namespace detail

/// Builds the fair data set for an exposure: greedy pairing over the smaller
/// cohort in record order, partner drawn uniformly from the matching,
/// still-unmatched records of the other cohort. The response value is never
/// consulted while pairing.
inline FairDataset build_fair_dataset(const Dataset& d, const Pattern& exposure,
                                      std::span<const ItemId> controls, Matcher matcher,
                                      std::uint64_t seed) {
    const RecordBits exposed_mask = d.covering_mask(exposure);
    std::vector<RecordId> exposed = exposed_mask.to_indices();
    std::vector<RecordId> unexposed = exposed_mask.complement().to_indices();

    const bool small_is_exposed = exposed.size() <= unexposed.size();
    const std::vector<RecordId>& small = small_is_exposed ? exposed : unexposed;
    const std::vector<RecordId>& big = small_is_exposed ? unexposed : exposed;

    const detail::SignatureTable sig(d, controls);
    Rng rng(seed);
    FairDataset out;
    out.rng_seed = seed;

    if (matcher.kind == MatcherKind::exact) {
        std::unordered_map<std::string, std::vector<RecordId>> buckets;
        for (RecordId r : big) buckets[sig.key(r)].push_back(r);
        for (RecordId s : small) {
            const auto it = buckets.find(sig.key(s));
            if (it == buckets.end() || it->second.empty()) continue;
            const RecordId partner = detail::pick(it->second, rng);
            out.pairs.emplace_back(small_is_exposed ? s : partner,
                                   small_is_exposed ? partner : s);
        }
    } else {
        std::vector<char> used(big.size(), 0);
        std::vector<RecordId> best;
        std::vector<std::size_t> best_pos;
        for (RecordId s : small) {
            best.clear();
            best_pos.clear();
            std::uint64_t best_num = 0, best_den = 1;  // distance = num/den, 0/1 init max? see below
            bool have = false;
            for (std::size_t i = 0; i < big.size(); ++i) {
                if (used[i]) continue;
                const auto [inter, uni] = sig.overlap(s, big[i]);
                const std::uint64_t num = uni - inter;  // distance numerator
                const std::uint64_t den = uni == 0 ? 1 : uni;
                // compare num/den (this record) against best_num/best_den
                if (!have || num * best_den < best_num * den) {
                    best_num = num;
                    best_den = den;
                    best.assign(1, big[i]);
                    best_pos.assign(1, i);
                    have = true;
                } else if (num * best_den == best_num * den) {
                    best.push_back(big[i]);
                    best_pos.push_back(i);
                }
            }
            if (!have) continue;
            // matched only when distance <= 1 - theta
            if (static_cast<double>(best_num) >
                (1.0 - matcher.theta) * static_cast<double>(best_den))
                continue;
            const std::size_t at = best.size() == 1 ? 0 : rng.index(best.size());
            used[best_pos[at]] = 1;
            const RecordId partner = best[at];
            out.pairs.emplace_back(small_is_exposed ? s : partner,
                                   small_is_exposed ? partner : s);
        }
    }

    const RecordBits& z = d.response_column();
    for (const auto& [e, n] : out.pairs) {
        const bool ze = z.test(e), zn = z.test(n);
        if (ze && zn)
            ++out.table.n11;
        else if (ze && !zn)
            ++out.table.n12;
        else if (!ze && zn)
            ++out.table.n21;
        else
            ++out.table.n22;
    }
    return out;
}

/// Reorients pair outcomes so that "positive" means the rule's target value.
inline MatchedPairTable oriented(const MatchedPairTable& t, Target target) {
    if (target == Target::z) return t;
    return {t.n22, t.n21, t.n12, t.n11};
}

/// Runs the whole cohort test for one association rule: assemble the control
/// set, build the fair data set, apply the causal criterion.
inline CausalRule test_causal(const Dataset& d, const AssociationRule& rule,
                              std::span<const ItemId> universe,
                              std::span<const ItemId> irrelevant, std::uint64_t epsilon,
                              CausalCriterion criterion, Matcher matcher,
                              std::uint64_t seed) {
    const ControlSet cs = build_control_set(d, rule.lhs, universe, irrelevant, epsilon);
    const FairDataset fair = build_fair_dataset(d, rule.lhs, cs.controls, matcher, seed);

    CausalRule out;
    out.rule = rule;
    out.pair_table = oriented(fair.table, rule.target);
    out.n_pairs = out.pair_table.pairs();
    out.fair_or = fair_odds_ratio(out.pair_table);
    out.fair_ci = matched_ci(out.pair_table, criterion.confidence);
    out.untestable = out.n_pairs == 0;
    out.causal = criterion.passes(out.pair_table);
    return out;
}

}  // namespace causalmine

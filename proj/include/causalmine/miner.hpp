#pragma once

#include <optional>
#include <vector>

#include "causalmine/dataset.hpp"
#include "causalmine/prefix_tree.hpp"
#include "causalmine/stats.hpp"

namespace causalmine {

/// A pattern -> response-value rule with its full-data statistics.
struct AssociationRule {
    Pattern lhs;
    Target target = Target::z;
    ContingencyTable table;
    double odds_ratio = 1.0;
    Interval ci;
    bool significant = false;
};

/// Association significance: the odds-ratio interval test by default, or a
/// plain threshold when min_oratio is set.
struct SignificanceTest {
    Confidence confidence = Confidence::pct95;
    std::optional<double> min_oratio;

    bool passes(const ContingencyTable& t) const {
        if (min_oratio) return odds_ratio(t) > *min_oratio;
        return or_confidence_interval(t, confidence).low > 1.0;
    }
};

/// The 2x2 table of p -> target given supp(p, z) and supp(p).
inline ContingencyTable contingency(const Dataset& d, std::uint64_t count_z,
                                    std::uint64_t count_any, Target target) {
    const std::uint64_t supp_z = d.response_support(Target::z);
    const std::uint64_t supp_nz = d.response_support(Target::not_z);
    const std::uint64_t count_nz = count_any - count_z;
    if (target == Target::z)
        return {count_z, count_nz, supp_z - count_z, supp_nz - count_nz};
    return {count_nz, count_z, supp_nz - count_nz, supp_z - count_z};
}

inline AssociationRule make_rule(const Dataset& d, const Pattern& lhs, Target target,
                                 std::uint64_t count_z, std::uint64_t count_any,
                                 const SignificanceTest& test) {
    AssociationRule r;
    r.lhs = lhs;
    r.target = target;
    r.table = contingency(d, count_z, count_any, target);
    r.odds_ratio = odds_ratio(r.table);
    r.ci = or_confidence_interval(r.table, test.confidence);
    r.significant = test.passes(r.table);
    return r;
}

inline AssociationRule make_rule(const Dataset& d, const Pattern& lhs, Target target,
                                 const SignificanceTest& test) {
    return make_rule(d, lhs, target, d.support(lhs, With::z), d.support(lhs), test);
}

/// Significant association rules at level k of the tree, both rule
/// directions, in tree (lexicographic) order. At most one direction can be
/// significant per pattern, since the two odds ratios are reciprocal.
inline std::vector<AssociationRule> rules_at_level(const PrefixTree& tree, int level,
                                                   const SignificanceTest& test) {
    std::vector<AssociationRule> out;
    const Dataset& d = tree.data();
    for (const TreeNode* n : tree.nodes_at(level)) {
        for (const Target t : {Target::z, Target::not_z}) {
            AssociationRule r = make_rule(d, n->pattern, t, n->count_z, n->count_any, test);
            if (r.significant) out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace causalmine

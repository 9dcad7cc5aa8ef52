#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "causalmine/dataset.hpp"
#include "causalmine/rng.hpp"

namespace causalmine {

struct PatternHash {
    std::size_t operator()(const Pattern& p) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.size();
        for (ItemId id : p) h = splitmix64(h ^ id);
        return static_cast<std::size_t>(h);
    }
};

struct TreeNode {
    ItemId label = 0;
    TreeNode* parent = nullptr;
    Pattern pattern;             // path from the root
    RecordBits cover;            // records where the whole pattern is 1
    std::uint64_t count_z = 0;   // supp(p, z)
    std::uint64_t count_any = 0; // supp(p)
    std::vector<std::unique_ptr<TreeNode>> children;  // ascending labels

    std::uint64_t count_notz() const { return count_any - count_z; }
};

/// Per-level bookkeeping of the candidate search.
struct LevelStats {
    int level = 0;
    std::size_t candidates = 0;      // joins generated (level 1: seeded items)
    std::size_t after_support = 0;   // survived the local-support cut
    std::size_t kept = 0;            // survived the sub-pattern cut as well
    std::size_t rules_tested = 0;    // significant association rules found
    std::size_t causal_found = 0;
};

/// Ordered prefix tree over item ids. Nodes cache their covering bitset so a
/// child's counts are one AND away from the parent's. A pattern index over
/// live nodes stands in for explicit backtrack links: immediate sub-patterns
/// are resolved by hash lookup when a new level is pruned.
class PrefixTree {
public:
    /// prune == false disables the equal-support / missing-sub-pattern cut
    /// (the support cut always applies).
    PrefixTree(const Dataset& d, double min_local_support, bool prune = true)
        : data_(&d), delta_(min_local_support), prune_(prune) {
        root_.pattern = {};
        levels_.resize(1);  // level index == pattern length
    }

    const Dataset& data() const { return *data_; }

    const std::vector<TreeNode*>& nodes_at(int level) const {
        static const std::vector<TreeNode*> empty;
        return level < static_cast<int>(levels_.size()) ? levels_[level] : empty;
    }

    /// Item ids whose 1-pattern survived the support cut (the mining
    /// universe; control variables are drawn from it too).
    std::vector<ItemId> frequent_items() const {
        std::vector<ItemId> out;
        out.reserve(levels_.size() > 1 ? levels_[1].size() : 0);
        if (levels_.size() > 1)
            for (const TreeNode* n : levels_[1]) out.push_back(n->label);
        return out;
    }

    /// Seeds level 1 from every predictor item and applies the support cut.
    LevelStats build_level1() {
        LevelStats st;
        st.level = 1;
        if (levels_.size() < 2) levels_.resize(2);
        const RecordBits& zcol = data_->response_column();
        for (ItemId id : data_->predictors()) {
            ++st.candidates;
            auto node = std::make_unique<TreeNode>();
            node->label = id;
            node->parent = &root_;
            node->pattern = {id};
            node->cover = data_->column(id);
            node->count_any = node->cover.count();
            node->count_z = node->cover.and_count(zcol);
            if (!frequent(*node)) continue;
            ++st.after_support;
            register_node(node.get());
            root_.children.push_back(std::move(node));
        }
        st.kept = st.after_support;
        return st;
    }

    /// Joins sibling (k-1)-patterns into k-candidates, counts them, and
    /// applies the support cut plus (when pruning) the sub-pattern cut:
    /// a candidate whose immediate sub-pattern is missing from the tree, or
    /// has the same support, is redundant and dropped.
    LevelStats extend_level(int k) {
        assert(k >= 2);
        LevelStats st;
        st.level = k;
        if (static_cast<int>(levels_.size()) <= k) levels_.resize(k + 1);
        const RecordBits& zcol = data_->response_column();

        std::vector<TreeNode*> parents;
        if (k == 2)
            parents.push_back(&root_);
        else
            parents = levels_[k - 2];

        for (TreeNode* parent : parents) {
            auto& siblings = parent->children;
            for (std::size_t i = 0; i < siblings.size(); ++i) {
                TreeNode* left = siblings[i].get();
                for (std::size_t j = i + 1; j < siblings.size(); ++j) {
                    TreeNode* right = siblings[j].get();
                    ++st.candidates;
                    auto node = std::make_unique<TreeNode>();
                    node->label = right->label;
                    node->parent = left;
                    node->pattern = left->pattern;
                    node->pattern.push_back(right->label);
                    node->cover = left->cover & data_->column(right->label);
                    node->count_any = node->cover.count();
                    node->count_z = node->cover.and_count(zcol);
                    if (!frequent(*node)) continue;
                    ++st.after_support;
                    if (prune_ && subsumed(*node)) continue;
                    ++st.kept;
                    register_node(node.get());
                    left->children.push_back(std::move(node));
                }
            }
        }

        // covers of level k-1 fed the joins above and are not needed again
        for (TreeNode* n : levels_[k - 1]) n->cover.clear_storage();
        return st;
    }

    /// Removes a node (and its empty subtree) from the tree: the pattern can
    /// no longer take part in any join. Used when its rule turned out causal.
    void remove_pattern(const Pattern& p) {
        const auto it = index_.find(p);
        if (it == index_.end()) return;
        TreeNode* node = it->second;
        assert(node->children.empty());
        auto& level = levels_[static_cast<int>(p.size())];
        std::erase(level, node);
        index_.erase(it);
        auto& siblings = node->parent->children;
        for (auto sib = siblings.begin(); sib != siblings.end(); ++sib) {
            if (sib->get() == node) {
                siblings.erase(sib);
                break;
            }
        }
    }

    const TreeNode* find(const Pattern& p) const {
        const auto it = index_.find(p);
        return it == index_.end() ? nullptr : it->second;
    }

private:
    bool frequent(const TreeNode& n) const {
        const auto over = [&](std::uint64_t count, Target t) {
            const std::uint64_t denom = data_->response_support(t);
            return denom > 0 &&
                   static_cast<double>(count) > delta_ * static_cast<double>(denom);
        };
        return over(n.count_z, Target::z) || over(n.count_notz(), Target::not_z);
    }

    /// True when some immediate sub-pattern is absent (itself pruned away)
    /// or covers exactly the same records.
    bool subsumed(const TreeNode& n) const {
        // the parent (drop the last item) is present by construction
        if (n.parent->count_any == n.count_any) return true;
        Pattern sub;
        sub.reserve(n.pattern.size() - 1);
        for (std::size_t drop = 0; drop + 1 < n.pattern.size(); ++drop) {
            sub.clear();
            for (std::size_t i = 0; i < n.pattern.size(); ++i)
                if (i != drop) sub.push_back(n.pattern[i]);
            const auto it = index_.find(sub);
            if (it == index_.end()) return true;
            if (it->second->count_any == n.count_any) return true;
        }
        return false;
    }

    void register_node(TreeNode* n) {
        levels_[static_cast<int>(n->pattern.size())].push_back(n);
        index_.emplace(n->pattern, n);
    }

    const Dataset* data_;
    double delta_;
    bool prune_;
    TreeNode root_;
    std::vector<std::vector<TreeNode*>> levels_;
    std::unordered_map<Pattern, TreeNode*, PatternHash> index_;
};

}  // namespace causalmine

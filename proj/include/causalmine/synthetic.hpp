#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalmine/dataset.hpp"
#include "causalmine/errors.hpp"
#include "causalmine/miner.hpp"
#include "causalmine/rng.hpp"

namespace causalmine {

/// What the generator planted: the names of the true single causes and of
/// the split combined-cause pairs, plus the full parameter record needed to
/// regenerate the data.
struct GroundTruth {
    std::vector<std::string> single_causes;
    std::vector<std::array<std::string, 2>> combined_causes;
    nlohmann::json generator_spec;
};

struct SyntheticData {
    Dataset dataset;
    GroundTruth truth;
};

inline void save_truth(const GroundTruth& g, const std::string& path) {
    nlohmann::json j;
    j["single_causes"] = g.single_causes;
    j["combined_causes"] = g.combined_causes;
    j["generator_spec"] = g.generator_spec;
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline GroundTruth load_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed truth file: ") + e.what());
    }
    GroundTruth g;
    g.single_causes = j.at("single_causes").get<std::vector<std::string>>();
    g.combined_causes =
        j.at("combined_causes").get<std::vector<std::array<std::string, 2>>>();
    g.generator_spec = j.value("generator_spec", nlohmann::json::object());
    return g;
}

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::vector<std::size_t> choose_distinct(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(ids[i], ids[i + rng.index(n - i)]);
    ids.resize(k);
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline std::vector<Item> predictor_items(int m) {
    std::vector<Item> items;
    items.reserve(m + 1);
    for (int i = 0; i < m; ++i) {
        const std::string name = "X" + std::to_string(i + 1);
        items.push_back({static_cast<ItemId>(i), name, name});
    }
    items.push_back({static_cast<ItemId>(m), "Z", "Z"});
    return items;
}

inline void check_response_rate(const Dataset& d) {
    const double rate = static_cast<double>(d.response_support(Target::z)) /
                        static_cast<double>(d.n_records());
    if (rate < 0.05 || rate > 0.95)
        throw generation_error("generated response rate " + std::to_string(rate) +
                               " outside [0.05, 0.95]");
}

}  // namespace detail

/// Random Bayesian network benchmark. Predictors form a random DAG (each
/// node up to 3 parents among lower-indexed nodes, conditional probabilities
/// uniform in [0.1, 0.9]); the response is a logistic function of
/// cause_count randomly chosen predictors, centred so its rate stays near
/// one half. Ancestral sampling, fully determined by the seed.
inline SyntheticData generate_bn(int m, int n, int cause_count, std::uint64_t seed) {
    if (cause_count >= m) throw config_error("cause count must be below the variable count");
    Rng rng(seed);

    std::vector<std::vector<std::size_t>> parents(m);
    for (int i = 0; i < m; ++i) {
        const std::size_t max_par = std::min<std::size_t>(3, i);
        const std::size_t n_par = rng.index(max_par + 1);
        if (n_par > 0) parents[i] = detail::choose_distinct(rng, i, n_par);
    }
    std::vector<std::vector<double>> cpt(m);
    for (int i = 0; i < m; ++i) {
        cpt[i].resize(std::size_t{1} << parents[i].size());
        for (double& p : cpt[i]) p = rng.real(0.1, 0.9);
    }

    const std::vector<std::size_t> causes = detail::choose_distinct(rng, m, cause_count);
    std::vector<double> coef(causes.size());
    for (double& b : coef) {
        const double sign = rng.bernoulli(0.3) ? -1.0 : 1.0;
        b = sign * rng.real(1.1, 2.0);
    }

    std::vector<RecordBits> columns(m + 1, RecordBits(n));
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < m; ++i) {
            std::size_t idx = 0;
            for (std::size_t p = 0; p < parents[i].size(); ++p)
                if (columns[parents[i][p]].test(r)) idx |= std::size_t{1} << p;
            if (rng.bernoulli(cpt[i][idx])) columns[i].set(r);
        }
    }

    std::vector<double> lin(n, 0.0);
    double lin_sum = 0.0;
    for (int r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < causes.size(); ++j)
            if (columns[causes[j]].test(r)) lin[r] += coef[j];
        lin_sum += lin[r];
    }
    const double b0 = -lin_sum / n;
    for (int r = 0; r < n; ++r)
        if (rng.bernoulli(detail::sigmoid(b0 + lin[r]))) columns[m].set(r);

    SyntheticData out{Dataset(detail::predictor_items(m), std::move(columns),
                              static_cast<ItemId>(m)),
                      {}};
    detail::check_response_rate(out.dataset);

    for (std::size_t c : causes)
        out.truth.single_causes.push_back(out.dataset.item(static_cast<ItemId>(c)).name);
    nlohmann::json spec;
    spec["model"] = "bn";
    spec["vars"] = m;
    spec["rows"] = n;
    spec["cause_count"] = cause_count;
    spec["seed"] = seed;
    spec["parents"] = parents;
    spec["cpt"] = cpt;
    spec["response_parents"] = causes;
    spec["response_coefficients"] = coef;
    spec["response_intercept"] = b0;
    out.truth.generator_spec = std::move(spec);
    return out;
}

/// Independent-predictor benchmark: items are Bernoulli with rates uniform
/// in [0.2, 0.8]; the response is Bernoulli(sigmoid(b0 + sum b_i x_i)) with
/// positive coefficients on the planted causes only.
inline SyntheticData generate_logistic(int m, int n, int cause_count, double coef_lo,
                                       double coef_hi, std::uint64_t seed) {
    if (cause_count >= m) throw config_error("cause count must be below the variable count");
    Rng rng(seed);

    std::vector<double> rates(m);
    for (double& p : rates) p = rng.real(0.2, 0.8);
    const std::vector<std::size_t> causes = detail::choose_distinct(rng, m, cause_count);
    std::vector<double> coef(causes.size());
    for (double& b : coef) b = rng.real(coef_lo, coef_hi);

    std::vector<RecordBits> columns(m + 1, RecordBits(n));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < m; ++i)
            if (rng.bernoulli(rates[i])) columns[i].set(r);

    double b0 = 0.0;
    for (std::size_t j = 0; j < causes.size(); ++j) b0 -= coef[j] * rates[causes[j]];
    for (int r = 0; r < n; ++r) {
        double lin = b0;
        for (std::size_t j = 0; j < causes.size(); ++j)
            if (columns[causes[j]].test(r)) lin += coef[j];
        if (rng.bernoulli(detail::sigmoid(lin))) columns[m].set(r);
    }

    SyntheticData out{Dataset(detail::predictor_items(m), std::move(columns),
                              static_cast<ItemId>(m)),
                      {}};
    detail::check_response_rate(out.dataset);

    for (std::size_t c : causes)
        out.truth.single_causes.push_back(out.dataset.item(static_cast<ItemId>(c)).name);
    nlohmann::json spec;
    spec["model"] = "logistic";
    spec["vars"] = m;
    spec["rows"] = n;
    spec["cause_count"] = cause_count;
    spec["seed"] = seed;
    spec["rates"] = rates;
    spec["response_parents"] = causes;
    spec["response_coefficients"] = coef;
    spec["coefficient_range"] = {coef_lo, coef_hi};
    spec["response_intercept"] = b0;
    out.truth.generator_spec = std::move(spec);
    return out;
}

/// Splits one planted cause X into two components Xa, Xb with X = Xa AND Xb,
/// where neither component is marginally associated with the response. The
/// components gain extra 1s on X=0 rows, balanced across response values so
/// each component's own odds ratio lands at 1; the association test then
/// verifies the construction, resampling the row choice a bounded number of
/// times.
inline SyntheticData plant_combined(const SyntheticData& in, const std::string& cause_name,
                                    std::uint64_t seed) {
    const Dataset& d = in.dataset;
    const auto found = std::find(in.truth.single_causes.begin(),
                                 in.truth.single_causes.end(), cause_name);
    if (found == in.truth.single_causes.end())
        throw config_error("'" + cause_name + "' is not a planted single cause");
    const ItemId x = *d.find_item(cause_name);

    const RecordBits& xcol = d.column(x);
    const RecordBits& zcol = d.response_column();
    const std::uint64_t n = d.n_records();
    const std::uint64_t supp_x = xcol.count();
    const std::uint64_t supp_xz = xcol.and_count(zcol);
    const std::uint64_t supp_z = d.response_support(Target::z);
    const double rate_z = static_cast<double>(supp_z) / static_cast<double>(n);

    // records with X=0, split by response value
    std::vector<RecordId> pool_z, pool_nz;
    for (RecordId r : xcol.complement().to_indices())
        (zcol.test(r) ? pool_z : pool_nz).push_back(r);

    // The components gain extra 1s on X=0 rows, drawn from the response value
    // that dilutes the X block's excess until the component's own z share
    // sits at the base rate. Clamped to what the pools can give both
    // components; the interval check below decides whether the residual
    // association is small enough.
    const double gap = static_cast<double>(supp_xz) - rate_z * static_cast<double>(supp_x);
    std::uint64_t extra_z = 0, extra_nz = 0;
    if (gap > 0)
        extra_nz = static_cast<std::uint64_t>(std::llround(gap / rate_z));
    else
        extra_z = static_cast<std::uint64_t>(std::llround(-gap / (1.0 - rate_z)));
    extra_z = std::min<std::uint64_t>(extra_z, pool_z.size() / 2);
    extra_nz = std::min<std::uint64_t>(extra_nz, pool_nz.size() / 2);
    if (extra_z + extra_nz == 0) {
        // components must cover strictly more than X itself
        if (pool_nz.size() >= 2)
            extra_nz = 1;
        else if (pool_z.size() >= 2)
            extra_z = 1;
        else
            throw generation_error("cannot split '" + cause_name +
                                   "': no X=0 records to extend the components with");
    }

    Rng rng(seed);
    {
        for (std::size_t i = 0; i + 1 < pool_z.size(); ++i)
            std::swap(pool_z[i], pool_z[i + rng.index(pool_z.size() - i)]);
        for (std::size_t i = 0; i + 1 < pool_nz.size(); ++i)
            std::swap(pool_nz[i], pool_nz[i + rng.index(pool_nz.size() - i)]);

        RecordBits xa = xcol, xb = xcol;
        for (std::uint64_t i = 0; i < extra_z; ++i) {
            xa.set(pool_z[i]);
            xb.set(pool_z[extra_z + i]);
        }
        for (std::uint64_t i = 0; i < extra_nz; ++i) {
            xa.set(pool_nz[i]);
            xb.set(pool_nz[extra_nz + i]);
        }

        // the component's 2x2 table is fully determined by the counts, so a
        // failed check cannot be retried away
        const auto non_associated = [&](const RecordBits& col) {
            const std::uint64_t supp = col.count();
            const ContingencyTable t =
                contingency(d, col.and_count(zcol), supp, Target::z);
            return !associated_two_sided(t, Confidence::pct95);
        };
        if (!non_associated(xa) || !non_associated(xb))
            throw generation_error("cannot split '" + cause_name +
                                   "': component association cannot be diluted below "
                                   "significance");

        // rebuild: X replaced by Xa at the same index, Xb right after it
        std::vector<Item> items;
        std::vector<RecordBits> columns;
        ItemId response = 0;
        for (ItemId i = 0; i < d.n_items(); ++i) {
            const Item& it = d.item(i);
            if (i == x) {
                items.push_back({static_cast<ItemId>(items.size()), it.name + "a", it.name + "a"});
                columns.push_back(xa);
                items.push_back({static_cast<ItemId>(items.size()), it.name + "b", it.name + "b"});
                columns.push_back(xb);
                continue;
            }
            if (i == d.response()) response = static_cast<ItemId>(items.size());
            items.push_back({static_cast<ItemId>(items.size()), it.name, it.attribute_group});
            columns.push_back(d.column(i));
        }

        SyntheticData out{Dataset(std::move(items), std::move(columns), response),
                          in.truth};
        out.truth.single_causes.erase(std::find(out.truth.single_causes.begin(),
                                                out.truth.single_causes.end(), cause_name));
        out.truth.combined_causes.push_back({cause_name + "a", cause_name + "b"});
        nlohmann::json split;
        split["cause"] = cause_name;
        split["seed"] = seed;
        split["extra_z"] = extra_z;
        split["extra_nz"] = extra_nz;
        out.truth.generator_spec["splits"].push_back(split);
        return out;
    }
}

/// Plants `count` combined causes. Candidates are the planted single causes
/// in descending order of marginal association strength, so the planted
/// pairs stay discoverable; causes whose split is infeasible are skipped.
inline SyntheticData plant_many(SyntheticData data, int count, std::uint64_t seed) {
    Rng rng(seed);

    std::vector<std::pair<double, std::string>> ranked;
    for (const std::string& cause : data.truth.single_causes) {
        const Dataset& d = data.dataset;
        const ItemId id = *d.find_item(cause);
        const ContingencyTable t =
            contingency(d, d.support({id}, With::z), d.support({id}), Target::z);
        const double w = odds_ratio(t);
        ranked.emplace_back(std::max(w, 1.0 / w), cause);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    int planted = 0;
    for (const auto& [strength, cause] : ranked) {
        if (planted == count) break;
        try {
            data = plant_combined(data, cause, rng.next_u64());
            ++planted;
        } catch (const generation_error&) {
            // this cause cannot be de-associated; try the next one
        }
    }
    if (planted < count)
        throw generation_error("only " + std::to_string(planted) + " of " +
                               std::to_string(count) + " combined causes could be planted");
    return data;
}

/// A discovered rule reduced to what scoring needs.
struct ScoredRule {
    std::vector<std::string> lhs_names;
};

struct ScoreResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t found_singles = 0;
    std::size_t correct_singles = 0;
    std::size_t truth_singles = 0;
    std::size_t combined_hits = 0;
    std::size_t combined_truth = 0;
    std::size_t combined_extras = 0;
};

/// Single-cause precision/recall/F1 against the planted truth, plus the
/// recovered and extra two-item rules. Extras are reported, not penalised:
/// there is no complete ground truth of all combined causes.
inline ScoreResult score(const std::vector<ScoredRule>& rules, const GroundTruth& truth) {
    std::set<std::string> found1;
    std::set<std::set<std::string>> found2;
    for (const ScoredRule& r : rules) {
        if (r.lhs_names.size() == 1)
            found1.insert(r.lhs_names.front());
        else if (r.lhs_names.size() == 2)
            found2.insert({r.lhs_names.begin(), r.lhs_names.end()});
    }

    const std::set<std::string> truth1(truth.single_causes.begin(),
                                       truth.single_causes.end());
    ScoreResult s;
    s.found_singles = found1.size();
    s.truth_singles = truth1.size();
    for (const std::string& f : found1)
        if (truth1.count(f)) ++s.correct_singles;

    s.precision = found1.empty()
                      ? 0.0
                      : static_cast<double>(s.correct_singles) / s.found_singles;
    s.recall = truth1.empty() ? 1.0
                              : static_cast<double>(s.correct_singles) / s.truth_singles;
    if (found1.empty() && !truth1.empty()) s.recall = 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;

    s.combined_truth = truth.combined_causes.size();
    for (const auto& pair : truth.combined_causes)
        if (found2.count({pair.begin(), pair.end()})) ++s.combined_hits;
    s.combined_extras = found2.size() - s.combined_hits;
    return s;
}

}  // namespace causalmine

#pragma once

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalmine/dataset.hpp"
#include "causalmine/engine.hpp"
#include "causalmine/synthetic.hpp"

namespace causalmine {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json config_to_json(const MiningConfig& cfg) {
    nlohmann::json j;
    j["min_local_support"] = cfg.min_local_support;
    j["max_rule_length"] = cfg.max_rule_length;
    j["confidence"] = cfg.confidence == Confidence::pct95 ? 0.95 : 0.99;
    if (cfg.min_oratio)
        j["min_oratio"] = *cfg.min_oratio;
    else
        j["min_oratio"] = nullptr;
    j["matcher"] = cfg.matcher.kind == MatcherKind::exact ? "exact" : "jaccard";
    j["jaccard_theta"] = cfg.matcher.theta;
    j["runs"] = cfg.runs;
    j["consensus_min"] = cfg.consensus_min;
    if (cfg.epsilon)
        j["epsilon"] = *cfg.epsilon;
    else
        j["epsilon"] = nullptr;
    j["seed"] = cfg.seed;
    j["prune"] = cfg.prune;
    return j;
}

inline nlohmann::json summary_to_json(const LoadSummary& s) {
    nlohmann::json j;
    j["n_records"] = s.n_records;
    j["n_items"] = s.n_items;
    j["missing_cells"] = s.missing_cells;
    j["groups"] = s.groups;
    if (!s.binned_columns.empty()) j["binned_columns"] = s.binned_columns;
    return j;
}

inline nlohmann::json rule_to_json(const ReportRule& rr, const Dataset& d) {
    const CausalRule& cr = rr.stats;
    nlohmann::json j;
    std::vector<std::string> names;
    names.reserve(cr.rule.lhs.size());
    for (ItemId id : cr.rule.lhs) names.push_back(d.item(id).name);
    j["lhs"] = names;
    j["target"] = target_name(cr.rule.target);
    j["supp_pz"] = cr.rule.table.a;
    j["supp_pnotz"] = cr.rule.table.b;
    j["odds_ratio"] = cr.rule.odds_ratio;
    j["ci_low"] = cr.rule.ci.low;
    j["ci_high"] = cr.rule.ci.high;
    j["n_pairs"] = cr.n_pairs;
    j["fair_odds_ratio"] = cr.fair_or;
    j["fair_ci_low"] = cr.fair_ci.low;
    j["fair_ci_high"] = cr.fair_ci.high;
    j["causal"] = cr.causal;
    j["untestable"] = cr.untestable;
    j["runs"] = rr.runs;
    return j;
}

/// JSON-lines serialisation: a header object carrying the schema version and
/// the configuration, then one rule object per line. Timings are deliberately
/// not included, so equal inputs give byte-equal files.
inline void write_jsonl(const MiningReport& report, const Dataset& d, std::ostream& out,
                        const LoadSummary* summary = nullptr) {
    nlohmann::json header;
    header["schema_version"] = kReportSchemaVersion;
    header["config"] = config_to_json(report.config);
    header["n_rules"] = report.rules.size();
    if (summary) header["load_summary"] = summary_to_json(*summary);
    out << header.dump() << '\n';
    for (const ReportRule& rr : report.rules) out << rule_to_json(rr, d).dump() << '\n';
}

/// Reads rules back from a JSON-lines report (header line optional).
inline std::vector<ScoredRule> read_rules_jsonl(std::istream& in) {
    std::vector<ScoredRule> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw input_error("bad JSON on line " + std::to_string(line_no) + ": " +
                              e.what());
        }
        if (!j.contains("lhs")) continue;  // header or foreign line
        out.push_back({j.at("lhs").get<std::vector<std::string>>()});
    }
    return out;
}

inline std::vector<ScoredRule> report_to_scored(const MiningReport& report,
                                                const Dataset& d) {
    std::vector<ScoredRule> out;
    out.reserve(report.rules.size());
    for (const ReportRule& rr : report.rules) {
        ScoredRule s;
        for (ItemId id : rr.stats.rule.lhs) s.lhs_names.push_back(d.item(id).name);
        out.push_back(std::move(s));
    }
    return out;
}

/// Human-readable rule table.
inline void print_table(const MiningReport& report, const Dataset& d, std::ostream& out) {
    out << report.rules.size() << " causal rule(s), consensus >= "
        << report.config.consensus_min << " of " << report.config.runs << " run(s)\n";
    if (report.rules.empty()) return;

    const auto fmt = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << v;
        return s.str();
    };
    std::vector<std::array<std::string, 6>> rows;
    rows.push_back({"rule", "odds_ratio", "ci", "pairs", "fair_or", "fair_ci"});
    for (const ReportRule& rr : report.rules) {
        const CausalRule& cr = rr.stats;
        std::string lhs;
        for (ItemId id : cr.rule.lhs) {
            if (!lhs.empty()) lhs += " & ";
            lhs += d.item(id).name;
        }
        lhs += cr.rule.target == Target::z ? " -> z" : " -> not z";
        rows.push_back({lhs, fmt(cr.rule.odds_ratio),
                        "[" + fmt(cr.rule.ci.low) + ", " + fmt(cr.rule.ci.high) + "]",
                        std::to_string(cr.n_pairs), fmt(cr.fair_or),
                        "[" + fmt(cr.fair_ci.low) + ", " + fmt(cr.fair_ci.high) + "]"});
    }
    std::array<std::size_t, 6> width{};
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
        out << '\n';
    }
}

}  // namespace causalmine

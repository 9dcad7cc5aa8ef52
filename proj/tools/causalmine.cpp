// Command-line front end: mine causal rules from a CSV, generate ground-
// truthed synthetic benchmarks, and score rule output against a truth file.
//
// Exit codes: 0 success, 1 input error, 2 configuration/usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "causalmine/causalmine.hpp"

namespace {

using namespace causalmine;

struct MineArgs {
    std::string input;
    std::string response;
    std::string positive = "1";
    std::string out = "rules.jsonl";
    double min_lsupp = 0.05;
    int max_len = 4;
    double confidence = 0.95;
    double min_oratio = 0.0;  // 0 = interval tests
    std::string matcher = "exact";
    double jaccard_theta = 0.9;
    int runs = 3;
    int consensus = 2;
    std::int64_t epsilon = -1;  // -1 = floor(min_lsupp * n)
    std::uint64_t seed = 1;
    int threads = 0;
    int bins = 0;
    bool no_prune = false;
};

MiningConfig to_config(const MineArgs& a, std::size_t) {
    MiningConfig cfg;
    cfg.min_local_support = a.min_lsupp;
    cfg.max_rule_length = a.max_len;
    if (a.confidence == 0.95)
        cfg.confidence = Confidence::pct95;
    else if (a.confidence == 0.99)
        cfg.confidence = Confidence::pct99;
    else
        throw config_error("--confidence must be 0.95 or 0.99");
    if (a.min_oratio > 0) cfg.min_oratio = a.min_oratio;
    if (a.matcher == "exact")
        cfg.matcher.kind = MatcherKind::exact;
    else if (a.matcher == "jaccard")
        cfg.matcher.kind = MatcherKind::jaccard;
    else
        throw config_error("--matcher must be 'exact' or 'jaccard'");
    cfg.matcher.theta = a.jaccard_theta;
    cfg.runs = a.runs;
    cfg.consensus_min = a.consensus;
    if (a.epsilon >= 0) cfg.epsilon = static_cast<std::uint64_t>(a.epsilon);
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.prune = !a.no_prune;
    cfg.validate();
    return cfg;
}

int run_mine(const MineArgs& a) {
    LoadOptions opt;
    opt.bins = a.bins;
    const LoadResult loaded = load_csv(a.input, a.response, a.positive, opt);
    const MiningConfig cfg = to_config(a, loaded.dataset.n_records());

    const MiningReport report = mine(loaded.dataset, cfg);

    std::ofstream out(a.out);
    if (!out) throw input_error("cannot write " + a.out);
    write_jsonl(report, loaded.dataset, out, &loaded.summary);

    print_table(report, loaded.dataset, std::cout);
    std::cout << "report written to " << a.out << "\n";
    return 0;
}

struct GenArgs {
    std::string model;
    int vars = 20;
    int rows = 2000;
    int causes = 7;
    int combined = 0;
    double coef_lo = 1.0;
    double coef_hi = 3.0;
    std::uint64_t seed = 1;
    std::string out = "data";
};

int run_gen(const GenArgs& a) {
    SyntheticData sd = a.model == "bn"
                           ? generate_bn(a.vars, a.rows, a.causes, a.seed)
                           : generate_logistic(a.vars, a.rows, a.causes, a.coef_lo,
                                               a.coef_hi, a.seed);
    if (a.combined > 0) sd = plant_many(std::move(sd), a.combined, mix_seed(a.seed, 0x5e));

    const std::string csv_path = a.out + ".csv";
    const std::string truth_path = a.out + ".truth.json";
    std::ofstream csv(csv_path);
    if (!csv) throw input_error("cannot write " + csv_path);
    write_csv(sd.dataset, csv);
    save_truth(sd.truth, truth_path);

    std::cout << "wrote " << csv_path << " (" << sd.dataset.n_records() << " rows, "
              << sd.dataset.n_items() << " items) and " << truth_path << "\n";
    return 0;
}

struct ScoreArgs {
    std::string rules;
    std::string truth;
};

int run_score(const ScoreArgs& a) {
    std::ifstream in(a.rules);
    if (!in) throw input_error("cannot open " + a.rules);
    const std::vector<ScoredRule> rules = read_rules_jsonl(in);
    const GroundTruth truth = load_truth(a.truth);
    const ScoreResult s = score(rules, truth);

    nlohmann::json j;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f1"] = s.f1;
    j["found_singles"] = s.found_singles;
    j["correct_singles"] = s.correct_singles;
    j["truth_singles"] = s.truth_singles;
    j["combined_hits"] = s.combined_hits;
    j["combined_truth"] = s.combined_truth;
    j["combined_extras"] = s.combined_extras;
    std::cout << j.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal rule mining via matched cohort testing"};
    app.require_subcommand(1);

    MineArgs ma;
    CLI::App* mine_cmd = app.add_subcommand("mine", "mine causal rules from a CSV");
    mine_cmd->add_option("--input", ma.input, "input CSV file")->required();
    mine_cmd->add_option("--response", ma.response, "response column name")->required();
    mine_cmd->add_option("--positive", ma.positive, "response value counted as positive");
    mine_cmd->add_option("--min-lsupp", ma.min_lsupp, "minimum local support");
    mine_cmd->add_option("--max-len", ma.max_len, "maximum rule length");
    mine_cmd->add_option("--confidence", ma.confidence, "0.95 or 0.99");
    mine_cmd->add_option("--min-oratio", ma.min_oratio,
                         "odds ratio threshold; replaces the interval tests");
    mine_cmd->add_option("--matcher", ma.matcher, "exact or jaccard");
    mine_cmd->add_option("--jaccard-theta", ma.jaccard_theta, "jaccard similarity cutoff");
    mine_cmd->add_option("--runs", ma.runs, "number of mining runs");
    mine_cmd->add_option("--consensus", ma.consensus, "minimum runs per reported rule");
    mine_cmd->add_option("--epsilon", ma.epsilon, "exclusivity cutoff (records)");
    mine_cmd->add_option("--seed", ma.seed, "master seed");
    mine_cmd->add_option("--threads", ma.threads, "worker threads (0 = all cores)");
    mine_cmd->add_option("--bins", ma.bins, "equi-width bins for continuous columns");
    mine_cmd->add_flag("--no-prune", ma.no_prune, "disable redundancy pruning (debug)");
    mine_cmd->add_option("--out", ma.out, "rule report path (JSON lines)");

    GenArgs ga;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic benchmark");
    gen_cmd->add_option("--model", ga.model, "bn or logistic")
        ->required()
        ->check(CLI::IsMember({"bn", "logistic"}));
    gen_cmd->add_option("--vars", ga.vars, "predictor count")->required();
    gen_cmd->add_option("--rows", ga.rows, "record count")->required();
    gen_cmd->add_option("--causes", ga.causes, "planted cause count")->required();
    gen_cmd->add_option("--combined", ga.combined, "combined causes to plant");
    gen_cmd->add_option("--coef-lo", ga.coef_lo, "logistic coefficient lower bound");
    gen_cmd->add_option("--coef-hi", ga.coef_hi, "logistic coefficient upper bound");
    gen_cmd->add_option("--seed", ga.seed, "generator seed");
    gen_cmd->add_option("--out", ga.out, "output prefix")->required();

    ScoreArgs sa;
    CLI::App* score_cmd = app.add_subcommand("score", "score rules against ground truth");
    score_cmd->add_option("--rules", sa.rules, "rules.jsonl from mine")->required();
    score_cmd->add_option("--truth", sa.truth, "truth.json from gen")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    }

    try {
        if (mine_cmd->parsed()) return run_mine(ma);
        if (gen_cmd->parsed()) return run_gen(ga);
        if (score_cmd->parsed()) return run_score(sa);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

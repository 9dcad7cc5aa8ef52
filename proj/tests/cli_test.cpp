#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "causalmine/report_io.hpp"
#include "helpers.hpp"

namespace {

namespace fs = std::filesystem;

std::string binary() {
    const char* bin = std::getenv("CAUSALMINE_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() /
                         ("causalmine_cli_out_" + std::to_string(::getpid()) + ".txt");
    const std::string cmd = binary() + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    fs::remove(out);
    return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct WorkDir {
    fs::path dir;
    WorkDir() {
        dir = fs::temp_directory_path() /
              ("causalmine_cli_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~WorkDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("gen, mine, score round trip") {
    WorkDir wd;
    const auto gen = run("gen --model logistic --vars 10 --rows 2000 --causes 3"
                         " --coef-lo 2 --coef-hi 3 --seed 5 --out " +
                         (wd / "v10"));
    REQUIRE(gen.exit_code == 0);
    REQUIRE(fs::exists(wd / "v10.csv"));
    REQUIRE(fs::exists(wd / "v10.truth.json"));

    const auto mined = run("mine --input " + (wd / "v10.csv") +
                           " --response Z --positive 1 --max-len 2 --confidence 0.99"
                           " --seed 3 --threads 1 --out " +
                           (wd / "rules.jsonl"));
    REQUIRE(mined.exit_code == 0);
    REQUIRE(fs::exists(wd / "rules.jsonl"));
    CHECK(mined.stdout_text.find("causal rule") != std::string::npos);

    const auto scored =
        run("score --rules " + (wd / "rules.jsonl") + " --truth " + (wd / "v10.truth.json"));
    REQUIRE(scored.exit_code == 0);
    const auto j = nlohmann::json::parse(scored.stdout_text);
    CHECK(j["f1"].get<double>() > 0.9);  // strong causes at n=2000 are easy
    CHECK(j["truth_singles"] == 3);
}

TEST_CASE("mine is byte-deterministic for a fixed seed") {
    WorkDir wd;
    REQUIRE(run("gen --model bn --vars 8 --rows 500 --causes 2 --seed 9 --out " +
                (wd / "d"))
                .exit_code == 0);
    const std::string mine_args = "mine --input " + (wd / "d.csv") +
                                  " --response Z --positive 1 --max-len 2 --seed 11"
                                  " --threads 2 --out ";
    REQUIRE(run(mine_args + (wd / "r1.jsonl")).exit_code == 0);
    REQUIRE(run(mine_args + (wd / "r2.jsonl")).exit_code == 0);
    const std::string a = slurp(wd / "r1.jsonl");
    CHECK(!a.empty());
    CHECK(a == slurp(wd / "r2.jsonl"));
}

TEST_CASE("max-len 1 limits the report to single-item rules") {
    WorkDir wd;
    REQUIRE(run("gen --model logistic --vars 8 --rows 1500 --causes 2 --coef-lo 2"
                " --coef-hi 3 --seed 2 --out " +
                (wd / "d"))
                .exit_code == 0);
    REQUIRE(run("mine --input " + (wd / "d.csv") +
                " --response Z --positive 1 --max-len 1 --threads 1 --out " +
                (wd / "r.jsonl"))
                .exit_code == 0);
    std::ifstream in(wd / "r.jsonl");
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        if (!j.contains("lhs")) continue;
        any = true;
        CHECK(j["lhs"].size() == 1);
    }
    CHECK(any);
}

TEST_CASE("exit codes") {
    WorkDir wd;
    SECTION("unknown flag is a usage error") {
        CHECK(run("mine --input x.csv --response Z --frobnicate").exit_code == 2);
    }
    SECTION("unknown subcommand is a usage error") {
        CHECK(run("transmogrify").exit_code == 2);
    }
    SECTION("unreadable input file") {
        CHECK(run("mine --input /does/not/exist.csv --response Z").exit_code == 1);
    }
    SECTION("missing response column is a configuration error") {
        std::ofstream csv(wd / "t.csv");
        csv << "A,B\n1,0\n0,1\n";
        csv.close();
        CHECK(run("mine --input " + (wd / "t.csv") + " --response Z").exit_code == 2);
    }
    SECTION("bad confidence value is a configuration error") {
        std::ofstream csv(wd / "t.csv");
        csv << "A,Z\n1,0\n0,1\n1,1\n0,0\n";
        csv.close();
        CHECK(run("mine --input " + (wd / "t.csv") +
                  " --response Z --confidence 0.9")
                  .exit_code == 2);
    }
    SECTION("help exits zero") {
        CHECK(run("--help").exit_code == 0);
        CHECK(run("mine --help").exit_code == 0);
    }
    SECTION("score with unreadable files") {
        CHECK(run("score --rules /none.jsonl --truth /none.json").exit_code == 1);
    }
}

TEST_CASE("report header carries schema version and config echo") {
    WorkDir wd;
    REQUIRE(run("gen --model logistic --vars 6 --rows 400 --causes 1 --seed 4 --out " +
                (wd / "d"))
                .exit_code == 0);
    REQUIRE(run("mine --input " + (wd / "d.csv") +
                " --response Z --positive 1 --min-lsupp 0.07 --max-len 2 --runs 3"
                " --consensus 2 --seed 19 --threads 1 --out " +
                (wd / "r.jsonl"))
                .exit_code == 0);
    std::ifstream in(wd / "r.jsonl");
    std::string header_line;
    REQUIRE(std::getline(in, header_line));
    const auto h = nlohmann::json::parse(header_line);
    CHECK(h["schema_version"] == 1);
    CHECK(h["config"]["min_local_support"] == 0.07);
    CHECK(h["config"]["seed"] == 19);
    CHECK(h["config"]["runs"] == 3);
    CHECK(h["load_summary"]["n_records"] == 400);
}

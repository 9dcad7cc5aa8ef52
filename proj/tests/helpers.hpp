#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "causalmine/dataset.hpp"
#include "causalmine/rng.hpp"

namespace testutil {

/// Temp file that deletes itself; content written on construction.
class TempFile {
public:
    explicit TempFile(const std::string& content, const std::string& suffix = ".csv") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("causalmine_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++) + suffix);
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

// The eight-record salary/education table used throughout the worked
// examples; columns A,M,F,H,U,P,Z, response Z.
inline const char* kSalaryTableCsv =
    "A,M,F,H,U,P,Z\n"
    "1,0,1,0,0,1,1\n"
    "1,0,1,0,1,0,1\n"
    "1,1,0,1,0,0,0\n"
    "1,1,0,0,0,1,1\n"
    "0,0,1,0,0,1,0\n"
    "0,0,1,0,1,0,0\n"
    "0,1,0,1,0,0,0\n"
    "0,1,0,1,0,0,1\n";

inline causalmine::Dataset salary_table() {
    TempFile f(kSalaryTableCsv);
    return causalmine::load_csv(f.path(), "Z", "1").dataset;
}

/// Random independent binary dataset, m predictors + response, each column
/// Bernoulli with its own rate in [0.2, 0.8].
inline causalmine::Dataset random_dataset(int m, int n, std::uint64_t seed) {
    using namespace causalmine;
    Rng rng(seed);
    std::vector<Item> items;
    std::vector<RecordBits> cols;
    for (int i = 0; i <= m; ++i) {
        const std::string name = i == m ? "Z" : "C" + std::to_string(i);
        items.push_back({static_cast<ItemId>(i), name, name});
        RecordBits col(n);
        const double rate = rng.real(0.2, 0.8);
        for (int r = 0; r < n; ++r)
            if (rng.bernoulli(rate)) col.set(r);
        cols.push_back(std::move(col));
    }
    return Dataset(std::move(items), std::move(cols), static_cast<ItemId>(m));
}

}  // namespace testutil

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causalmine/bitset.hpp"
#include "causalmine/csv.hpp"
#include "causalmine/errors.hpp"

namespace causalmine {

using ItemId = std::uint32_t;
using RecordId = std::uint32_t;

/// One binary item. Items born from the same multi-valued source column share
/// an attribute_group and are mutually exclusive by construction.
struct Item {
    ItemId index = 0;
    std::string name;
    std::string attribute_group;
};

/// Strictly ascending item ids; the LHS of a rule. Never contains the
/// response item.
using Pattern = std::vector<ItemId>;

/// Response restriction for support queries.
enum class With { any, z, not_z };

/// Rule target value of the response.
enum class Target { z, not_z };

inline const char* target_name(Target t) { return t == Target::z ? "z" : "not_z"; }

struct LoadSummary {
    std::size_t n_records = 0;
    std::size_t n_items = 0;
    std::size_t missing_cells = 0;
    // source column -> item names created from it (response column included)
    std::map<std::string, std::vector<std::string>> groups;
    std::vector<std::string> binned_columns;
};

struct LoadOptions {
    // Columns that must contain only 0/1; any other cell is a parse error.
    std::vector<std::string> declared_binary;
    // 0 disables binning; otherwise continuous columns are equi-width binned.
    int bins = 0;
    // Cell contents treated as missing.
    std::vector<std::string> missing_markers{"", "?"};
};

/// Immutable binary record matrix with named items and a designated response
/// item. Columns are stored as per-item record bitsets, so every support
/// query is a popcount over ANDed words. All queries are const and safe to
/// call from concurrent workers.
class Dataset {
public:
    Dataset(std::vector<Item> items, std::vector<RecordBits> columns, ItemId response)
        : items_(std::move(items)), columns_(std::move(columns)), response_(response) {
        if (columns_.empty() || columns_.front().size() == 0)
            throw input_error("dataset has no records");
        n_records_ = columns_.front().size();
        supp_z_ = columns_[response_].count();
    }

    std::size_t n_records() const { return n_records_; }
    std::size_t n_items() const { return items_.size(); }
    ItemId response() const { return response_; }
    const Item& item(ItemId id) const { return items_[id]; }
    const std::vector<Item>& items() const { return items_; }
    const RecordBits& column(ItemId id) const { return columns_[id]; }
    const RecordBits& response_column() const { return columns_[response_]; }

    std::uint64_t response_support(Target t) const {
        return t == Target::z ? supp_z_ : n_records_ - supp_z_;
    }

    /// All item ids except the response, in id order.
    std::vector<ItemId> predictors() const {
        std::vector<ItemId> out;
        out.reserve(items_.size() - 1);
        for (ItemId i = 0; i < items_.size(); ++i)
            if (i != response_) out.push_back(i);
        return out;
    }

    std::optional<ItemId> find_item(const std::string& name) const {
        for (const Item& it : items_)
            if (it.name == name) return it.index;
        return std::nullopt;
    }

    /// Records where every item of the pattern is 1.
    RecordBits covering_mask(const Pattern& p) const {
        RecordBits m(n_records_, true);
        for (ItemId id : p) m &= columns_[id];
        return m;
    }

    std::vector<RecordId> covering_set(const Pattern& p) const {
        return covering_mask(p).to_indices();
    }

    std::uint64_t support(const Pattern& p, With with = With::any) const {
        if (p.size() == 1) {
            const RecordBits& col = columns_[p.front()];
            switch (with) {
                case With::any: return col.count();
                case With::z: return col.and_count(columns_[response_]);
                case With::not_z: return col.and_not_count(columns_[response_]);
            }
        }
        const RecordBits m = covering_mask(p);
        switch (with) {
            case With::any: return m.count();
            case With::z: return m.and_count(columns_[response_]);
            case With::not_z: return m.and_not_count(columns_[response_]);
        }
        return 0;
    }

    /// supp(p, target) / supp(target); support relative to the frequency of
    /// the target value, so one threshold works for both rule directions.
    double local_support(const Pattern& p, Target target) const {
        const std::uint64_t denom = response_support(target);
        if (denom == 0)
            throw stat_error("local support undefined: response value has zero support");
        const std::uint64_t num = support(p, target == Target::z ? With::z : With::not_z);
        return static_cast<double>(num) / static_cast<double>(denom);
    }

private:
    std::vector<Item> items_;
    std::vector<RecordBits> columns_;
    ItemId response_;
    std::size_t n_records_ = 0;
    std::uint64_t supp_z_ = 0;
};

struct LoadResult {
    Dataset dataset;
    LoadSummary summary;
};

namespace detail {

inline bool is_missing(const std::string& cell, const LoadOptions& opt) {
    return std::find(opt.missing_markers.begin(), opt.missing_markers.end(), cell) !=
           opt.missing_markers.end();
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Loads an RFC 4180 CSV with a header row into binary items.
///
/// Column handling:
///  - values within {0,1}: one item named after the column;
///  - other categorical: one item per distinct value ("col=value"), sharing
///    the column as attribute_group (at most one is 1 per record);
///  - numeric columns that look continuous (fractional values, or more than
///    20 distinct integers) are rejected unless opt.bins > 0, in which case
///    they are equi-width binned;
///  - missing cells leave all items of the group 0 and are counted in the
///    load summary.
///
/// The response column always becomes a single item, 1 where the cell equals
/// positive_value.
inline LoadResult load_csv(const std::string& path, const std::string& response_column,
                           const std::string& positive_value, const LoadOptions& opt = {}) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw input_error("empty file: " + path);
    const std::vector<std::string>& header = rows.front();
    if (rows.size() == 1) throw input_error("no data rows in " + path);

    const std::size_t n_cols = header.size();
    const std::size_t n_rows = rows.size() - 1;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != n_cols)
            throw parse_error("row has " + std::to_string(rows[r].size()) +
                                  " fields, header has " + std::to_string(n_cols),
                              r + 1, 1);

    std::size_t response_col = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (header[c] == response_column) response_col = c;
    if (response_col == n_cols)
        throw config_error("response column '" + response_column + "' not found");

    const auto declared_binary = [&](const std::string& col) {
        return std::find(opt.declared_binary.begin(), opt.declared_binary.end(), col) !=
               opt.declared_binary.end();
    };

    std::vector<Item> items;
    std::vector<RecordBits> columns;
    LoadSummary summary;
    summary.n_records = n_rows;

    auto add_item = [&](const std::string& name, const std::string& group) {
        items.push_back({static_cast<ItemId>(items.size()), name, group});
        columns.emplace_back(n_rows);
        summary.groups[group].push_back(name);
        return items.size() - 1;
    };

    ItemId response_item = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
        const std::string& col = header[c];

        if (c == response_col) {
            const std::size_t id = add_item(col, col);
            response_item = static_cast<ItemId>(id);
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (detail::is_missing(cell, opt)) {
                    ++summary.missing_cells;
                    continue;
                }
                if (cell == positive_value) columns[id].set(r);
            }
            continue;
        }

        // classify the column from its distinct non-missing values,
        // in first-appearance order so item ids are reproducible
        std::vector<std::string> distinct;
        std::unordered_map<std::string, std::size_t> value_index;
        bool all_numeric = true;
        bool any_fractional = false;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const std::string& cell = rows[r + 1][c];
            if (detail::is_missing(cell, opt)) continue;
            if (value_index.emplace(cell, distinct.size()).second) {
                distinct.push_back(cell);
                if (const auto num = detail::parse_number(cell)) {
                    if (*num != std::floor(*num)) any_fractional = true;
                } else {
                    all_numeric = false;
                }
            }
        }

        const bool binary_values = !distinct.empty() &&
                                   std::all_of(distinct.begin(), distinct.end(),
                                               [](const std::string& v) {
                                                   return v == "0" || v == "1";
                                               });
        if (declared_binary(col) && !binary_values) {
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (!detail::is_missing(cell, opt) && cell != "0" && cell != "1")
                    throw parse_error("non-binary value '" + cell + "' in binary column '" +
                                          col + "'",
                                      r + 2, c + 1);
            }
        }

        const bool continuous =
            all_numeric && !distinct.empty() && (any_fractional || distinct.size() > 20);

        if (binary_values) {
            const std::size_t id = add_item(col, col);
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (detail::is_missing(cell, opt))
                    ++summary.missing_cells;
                else if (cell == "1")
                    columns[id].set(r);
            }
        } else if (continuous && opt.bins <= 0) {
            throw input_error("column '" + col +
                              "' looks continuous; rerun with --bins to pre-bin it");
        } else if (continuous) {
            double lo = 0, hi = 0;
            bool first = true;
            for (const std::string& v : distinct) {
                const double x = *detail::parse_number(v);
                lo = first ? x : std::min(lo, x);
                hi = first ? x : std::max(hi, x);
                first = false;
            }
            const double width = (hi - lo) / opt.bins;
            std::vector<std::size_t> bin_items(opt.bins);
            for (int b = 0; b < opt.bins; ++b) {
                std::ostringstream name;
                name << col << "=bin" << b;
                bin_items[b] = add_item(name.str(), col);
            }
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (detail::is_missing(cell, opt)) {
                    ++summary.missing_cells;
                    continue;
                }
                const double x = *detail::parse_number(cell);
                int b = width > 0 ? static_cast<int>((x - lo) / width) : 0;
                b = std::clamp(b, 0, opt.bins - 1);
                columns[bin_items[b]].set(r);
            }
            summary.binned_columns.push_back(col);
        } else {
            if (distinct.empty())
                throw input_error("column '" + col + "' has no usable values");
            std::vector<std::size_t> value_items(distinct.size());
            for (std::size_t v = 0; v < distinct.size(); ++v)
                value_items[v] = add_item(col + "=" + distinct[v], col);
            for (std::size_t r = 0; r < n_rows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (detail::is_missing(cell, opt)) {
                    ++summary.missing_cells;
                    continue;
                }
                columns[value_items[value_index.at(cell)]].set(r);
            }
        }
    }

    summary.n_items = items.size();
    return LoadResult{Dataset(std::move(items), std::move(columns), response_item),
                      std::move(summary)};
}

/// Writes the dataset back out in the same dialect load_csv reads: one 0/1
/// column per item, so a round trip reproduces the item layout.
inline void write_csv(const Dataset& d, std::ostream& out) {
    std::vector<std::string> header;
    header.reserve(d.n_items());
    for (const Item& it : d.items()) header.push_back(it.name);
    csv::write_row(out, header);
    std::vector<std::string> row(d.n_items());
    for (std::size_t r = 0; r < d.n_records(); ++r) {
        for (ItemId i = 0; i < d.n_items(); ++i) row[i] = d.column(i).test(r) ? "1" : "0";
        csv::write_row(out, row);
    }
}

}  // namespace causalmine

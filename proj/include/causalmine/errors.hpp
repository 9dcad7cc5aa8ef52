#pragma once

#include <stdexcept>
#include <string>

namespace causalmine {

/// Unreadable, empty or malformed input data. CLI exit code 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: missing column, invalid flag combination. CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed cell content, carries the 1-based row/column location.
class parse_error : public input_error {
public:
    parse_error(const std::string& what, std::size_t row, std::size_t column)
        : input_error(what + " (row " + std::to_string(row) + ", column " +
                      std::to_string(column) + ")"),
          row_(row),
          column_(column) {}

    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// A statistic was requested that is undefined for the given counts.
class stat_error : public std::runtime_error {
public:
    explicit stat_error(const std::string& what) : std::runtime_error(what) {}
};

/// A synthetic data constraint could not be satisfied within the retry budget.
class generation_error : public std::runtime_error {
public:
    explicit generation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace causalmine

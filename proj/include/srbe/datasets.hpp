#pragma once

#include "srbe/common.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace srbe {

struct Dataset {
    std::string name;
    Matrix x;
    Vector y;
    std::vector<std::string> column_names;  // regressors only, x.cols() entries

    Index n() const { return x.rows(); }
    Index m() const { return x.cols(); }

    void validate() const {
        if (y.size() != n()) throw DimensionMismatch("Dataset: row counts disagree");
        if (!x.allFinite() || !y.allFinite())
            throw ValidationError("Dataset: non-finite entries");
        if (column_names.size() != static_cast<std::size_t>(m()))
            throw DimensionMismatch("Dataset: column name count != m");
    }
};

/// National R&D expenditures data: share of GNP spent by the United States
/// (response) against the former Soviet Union, France, West Germany and
/// Japan. Ten observations, four regressors, no intercept.
inline Dataset builtin_rnd_dataset() {
    Dataset ds;
    ds.name = "national_rnd_expenditure";
    ds.column_names = {"x1", "x2", "x3", "x4"};
    ds.x.resize(10, 4);
    ds.x << 1.9, 2.2, 1.9, 3.7,
            1.8, 2.2, 2.0, 3.8,
            1.8, 2.4, 2.1, 3.6,
            1.8, 2.4, 2.2, 3.8,
            2.0, 2.5, 2.3, 3.8,
            2.1, 2.6, 2.4, 3.7,
            2.1, 2.6, 2.6, 3.8,
            2.2, 2.6, 2.6, 4.0,
            2.3, 2.8, 2.8, 3.7,
            2.3, 2.7, 2.8, 3.8;
    ds.y.resize(10);
    ds.y << 2.3, 2.2, 2.2, 2.3, 2.4, 2.5, 2.6, 2.6, 2.7, 2.7;
    return ds;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

/// Strict decimal parse ('.' separator, optional exponent); anything else is
/// a ParseError naming the cell.
inline double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
    const std::string s = trimmed(raw);
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw ParseError("CSV cell at row " + std::to_string(row) + ", column " +
                         std::to_string(col) + " is not numeric: '" + raw + "'");
    return value;
}

}  // namespace detail

/// Loads a headered CSV. `response_column` selects the response by name; an
/// empty string means the final column.
inline Dataset load_csv(const std::string& path, const std::string& response_column = "") {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("CSV file is empty: " + path);
    std::vector<std::string> header = detail::split_csv_line(line);
    for (auto& h : header) h = detail::trimmed(h);
    if (header.size() < 2) throw ParseError("CSV needs at least one regressor and a response");

    std::size_t response_index = header.size() - 1;
    if (!response_column.empty()) {
        bool found = false;
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == response_column) {
                response_index = j;
                found = true;
                break;
            }
        if (!found) throw MissingColumn("CSV has no column named '" + response_column + "'");
    }

    std::vector<std::vector<double>> rows;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (detail::trimmed(line).empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("CSV row " + std::to_string(line_number) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(header.size()));
        std::vector<double> parsed(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j)
            parsed[j] = detail::parse_cell(cells[j], line_number, j + 1);
        rows.push_back(std::move(parsed));
    }
    if (rows.empty()) throw ParseError("CSV has a header but no data rows: " + path);

    Dataset ds;
    ds.name = path;
    ds.x.resize(static_cast<Index>(rows.size()), static_cast<Index>(header.size() - 1));
    ds.y.resize(static_cast<Index>(rows.size()));
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != response_index) ds.column_names.push_back(header[j]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Index col = 0;
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j == response_index)
                ds.y[static_cast<Index>(i)] = rows[i][j];
            else
                ds.x(static_cast<Index>(i), col++) = rows[i][j];
        }
    }
    ds.validate();
    return ds;
}

/// Serializes a dataset as CSV (regressor columns, response last).
inline std::string to_csv(const Dataset& ds, const std::string& response_name = "y") {
    std::ostringstream out;
    for (const auto& name : ds.column_names) out << name << ',';
    out << response_name << '\n';
    char buf[64];
    for (Index i = 0; i < ds.n(); ++i) {
        for (Index j = 0; j < ds.m(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g", ds.x(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.12g", ds.y[i]);
        out << buf << '\n';
    }
    return out.str();
}

/// FNV-1a 64-bit checksum; pins the builtin dataset bytes in tests.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace srbe

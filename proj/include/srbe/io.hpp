#pragma once

#include "srbe/comparison.hpp"
#include "srbe/datasets.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

namespace srbe {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Writes bytes to `path` atomically (temp file + rename).
inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// SMSE table CSV: one block per scenario, rows = estimators, columns = grid.
// ---------------------------------------------------------------------------

struct LabeledTable {
    std::string label;  // e.g. "l=4 p=0"
    SmseTable table;
};

inline std::string tables_to_csv(const std::vector<LabeledTable>& blocks) {
    std::ostringstream out;
    for (const auto& block : blocks) {
        out << "scenario," << block.label << '\n';
        out << "estimator";
        for (double g : block.table.grid) out << ',' << fmt_double(g);
        out << '\n';
        for (std::size_t r = 0; r < block.table.row_names.size(); ++r) {
            out << block.table.row_names[r];
            for (Index c = 0; c < block.table.values.cols(); ++c)
                out << ',' << fmt_double(block.table.values(static_cast<Index>(r), c));
            out << '\n';
        }
    }
    return out.str();
}

/// Parses the block layout back; used by `reproduce` to diff numerically.
inline std::vector<LabeledTable> tables_from_csv(const std::string& bytes) {
    std::vector<LabeledTable> blocks;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("scenario,", 0) == 0) {
            LabeledTable block;
            block.label = line.substr(9);
            if (!std::getline(in, line)) throw ParseError("table CSV: missing header row");
            const auto header = detail::split_csv_line(line);
            for (std::size_t j = 1; j < header.size(); ++j)
                block.table.grid.push_back(std::stod(header[j]));
            std::vector<std::vector<double>> rows;
            std::streampos mark = in.tellg();
            while (std::getline(in, line)) {
                if (line.rfind("scenario,", 0) == 0) {
                    in.seekg(mark);
                    break;
                }
                if (detail::trimmed(line).empty()) break;
                const auto cells = detail::split_csv_line(line);
                block.table.row_names.push_back(cells[0]);
                std::vector<double> vals;
                for (std::size_t j = 1; j < cells.size(); ++j) vals.push_back(std::stod(cells[j]));
                rows.push_back(std::move(vals));
                mark = in.tellg();
            }
            block.table.values.resize(static_cast<Index>(rows.size()),
                                      static_cast<Index>(block.table.grid.size()));
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < rows[r].size(); ++c)
                    block.table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
            blocks.push_back(std::move(block));
        }
    }
    return blocks;
}

// ---------------------------------------------------------------------------
// Comparison verdicts.
// ---------------------------------------------------------------------------

inline std::string verdicts_to_csv(const std::vector<std::vector<ComparisonVerdict>>& grid) {
    std::ostringstream out;
    out << "pair,level,precondition,precondition_reason,condition_value,verdict,boundary,"
           "crosscheck_min_eig\n";
    for (const auto& row : grid)
        for (const auto& v : row) {
            out << v.label_i << "->" << v.label_j << ',' << to_string(v.level) << ','
                << to_string(v.precondition) << ",\"" << v.precondition_reason << "\","
                << fmt_double(v.condition_value) << ',' << to_string(v.verdict) << ','
                << (v.boundary ? 1 : 0) << ',' << fmt_double(v.crosscheck_min_eig) << '\n';
        }
    return out.str();
}

inline nlohmann::json verdicts_to_json(const std::vector<std::vector<ComparisonVerdict>>& grid) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : grid)
        for (const auto& v : row) {
            arr.push_back({{"i", v.label_i},
                           {"j", v.label_j},
                           {"level", to_string(v.level)},
                           {"precondition", to_string(v.precondition)},
                           {"reason", v.precondition_reason},
                           {"condition_value", v.condition_value},
                           {"verdict", to_string(v.verdict)},
                           {"boundary", v.boundary},
                           {"crosscheck_min_eig", v.crosscheck_min_eig},
                           {"crosscheck_trace", v.crosscheck_trace}});
        }
    return arr;
}

// ---------------------------------------------------------------------------
// SVG line charts: fixed 800x600 viewBox, one polyline per series.
// ---------------------------------------------------------------------------

inline std::string svg_line_chart(const SmseTable& table, const std::string& title,
                                  const std::string& y_label = "SMSE") {
    constexpr double width = 800, height = 600;
    constexpr double left = 70, right = 160, top = 50, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    double xmin = table.grid.front(), xmax = table.grid.back();
    double ymin = table.values.minCoeff(), ymax = table.values.maxCoeff();
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "font-family=\"sans-serif\" font-size=\"13\">\n";
    svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt_double(left + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" "
           "font-size=\"16\">" << title << "</text>\n";

    // axes
    svg << "<line x1=\"" << fmt_double(left) << "\" y1=\"" << fmt_double(top + plot_h)
        << "\" x2=\"" << fmt_double(left + plot_w) << "\" y2=\"" << fmt_double(top + plot_h)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fmt_double(left) << "\" y1=\"" << fmt_double(top) << "\" x2=\""
        << fmt_double(left) << "\" y2=\"" << fmt_double(top + plot_h)
        << "\" stroke=\"black\"/>\n";

    for (double g : table.grid) {
        svg << "<line x1=\"" << fmt_double(px(g)) << "\" y1=\"" << fmt_double(top + plot_h)
            << "\" x2=\"" << fmt_double(px(g)) << "\" y2=\"" << fmt_double(top + plot_h + 5)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_double(px(g)) << "\" y=\"" << fmt_double(top + plot_h + 20)
            << "\" text-anchor=\"middle\">" << fmt_double(g) << "</text>\n";
    }
    svg << "<text x=\"" << fmt_double(left + plot_w / 2) << "\" y=\""
        << fmt_double(height - 15) << "\" text-anchor=\"middle\">k/d</text>\n";

    for (int t = 0; t <= 5; ++t) {
        const double yv = ymin + t * (ymax - ymin) / 5.0;
        svg << "<line x1=\"" << fmt_double(left - 5) << "\" y1=\"" << fmt_double(py(yv))
            << "\" x2=\"" << fmt_double(left) << "\" y2=\"" << fmt_double(py(yv))
            << "\" stroke=\"black\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", yv);
        svg << "<text x=\"" << fmt_double(left - 9) << "\" y=\"" << fmt_double(py(yv) + 4)
            << "\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    svg << "<text x=\"18\" y=\"" << fmt_double(top + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt_double(top + plot_h / 2) << ")\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < table.row_names.size(); ++s) {
        const char* color = palette[s % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t c = 0; c < table.grid.size(); ++c) {
            svg << fmt_double(px(table.grid[c])) << ','
                << fmt_double(py(table.values(static_cast<Index>(s), static_cast<Index>(c))));
            if (c + 1 < table.grid.size()) svg << ' ';
        }
        svg << "\"/>\n";
        const double ly = top + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << fmt_double(width - right + 10) << "\" y1=\"" << fmt_double(ly)
            << "\" x2=\"" << fmt_double(width - right + 34) << "\" y2=\"" << fmt_double(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt_double(width - right + 40) << "\" y=\"" << fmt_double(ly + 4)
            << "\">" << table.row_names[s] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---------------------------------------------------------------------------
// Run manifest, written atomically after every successful CLI run.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
    double timing_ms = 0.0;
    long long resamples = -1;  // simulation runs only
};

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::json j{{"command", m.command}, {"config_hash", m.config_hash},
                     {"seed", m.seed},       {"version", m.version},
                     {"outputs", m.outputs}, {"timing_ms", m.timing_ms}};
    if (m.resamples >= 0) j["resamples"] = m.resamples;
    for (const auto& file : m.outputs)
        if (!std::filesystem::exists(file)) throw Error("manifest lists missing output: " + file);
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace srbe

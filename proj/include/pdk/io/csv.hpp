#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "pdk/core/errors.hpp"

namespace pdk {

// Full-precision text for a double: 17 significant digits round-trip exactly.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

// Header + numeric rows, every cell at full precision.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path), width_(columns.size()) {
        if (!out_) throw io_error("cannot open '" + path + "' for writing");
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& cells) {
        if (cells.size() != width_) throw io_error("csv row has the wrong number of cells");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_full(cells[i]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t width_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw io_error("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        table.columns.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> cells;
        const char* p = line.c_str();
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p)
                throw io_error("'" + path + "' line " + std::to_string(line_no) +
                               ": expected a number");
            cells.push_back(v);
            p = end;
            while (*p == ' ' || *p == '\t') ++p;
            if (*p == ',') {
                ++p;
                continue;
            }
            if (*p == '\0') break;
            throw io_error("'" + path + "' line " + std::to_string(line_no) +
                           ": unexpected text after a number");
        }
        if (cells.size() != table.columns.size())
            throw io_error("'" + path + "' line " + std::to_string(line_no) +
                           ": expected " + std::to_string(table.columns.size()) + " cells");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

} // namespace pdk

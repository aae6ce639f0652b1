#include "lffrl/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lffrl {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open csv for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_)
        throw std::runtime_error("csv row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        if (std::holds_alternative<double>(cells[i]))
            out_ << format_double(std::get<double>(cells[i]));
        else if (std::holds_alternative<long>(cells[i]))
            out_ << std::get<long>(cells[i]);
        else
            out_ << std::get<std::string>(cells[i]);
    }
    out_ << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("csv column not found: " + name);
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    return std::stod(rows.at(row).at(col));
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

}  // namespace lffrl

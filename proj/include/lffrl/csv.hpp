#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace lffrl {

/// CSV emitter with a fixed header and stable full-precision number
/// formatting, so identical runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    using Cell = std::variant<double, long, std::string>;
    void row(const std::vector<Cell>& cells);
    void flush() { out_.flush(); }

    static std::string format_double(double v);

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace lffrl

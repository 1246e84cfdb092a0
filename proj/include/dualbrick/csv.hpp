#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dualbrick {

struct CsvColumn {
    std::string name;
    std::string description;  // meaning, units and log base
};

// Buffered CSV table; numbers use "%.17g" so output is byte-stable.
class CsvTable {
public:
    using Cell = std::variant<std::string, double, long long>;

    explicit CsvTable(std::vector<CsvColumn> columns);
    void add_row(std::vector<Cell> row);

    const std::vector<CsvColumn>& columns() const { return cols_; }
    std::size_t size() const { return rows_.size(); }
    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<CsvColumn> cols_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double v);

// minimal reader for files produced by CsvTable (no quoting)
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;  // -1 when absent
};

CsvData read_csv(const std::string& path);

}  // namespace dualbrick

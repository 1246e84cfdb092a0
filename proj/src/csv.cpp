#include "dualbrick/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dualbrick/errors.hpp"

namespace dualbrick {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<CsvColumn> columns) : cols_(std::move(columns)) {}

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != cols_.size()) throw validation_error("csv: row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i].name;
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (const auto* s = std::get_if<std::string>(&r[i]))
                os << *s;
            else if (const auto* d = std::get_if<double>(&r[i]))
                os << format_double(*d);
            else
                os << std::get<long long>(r[i]);
        }
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot write " + path);
    f << str();
    if (!f) throw io_error("write failed for " + path);
}

int CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvData read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot read " + path);
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    CsvData d;
    std::string line;
    if (!std::getline(f, line)) throw io_error(path + ": empty file");
    d.header = split(line);
    while (std::getline(f, line))
        if (!line.empty()) d.rows.push_back(split(line));
    return d;
}

}  // namespace dualbrick

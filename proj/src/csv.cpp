#include "funbench/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "funbench/errors.hpp"

namespace funbench {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += ',';
        out += cells[i];
    }
    return out;
}

}  // namespace

CsvText read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw SchemaError("'" + path + "' is empty; expected a header row");

    CsvText out;
    out.header = split_line(lines.front());
    out.rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) out.rows.push_back(split_line(lines[i]));
    return out;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
    const auto where = [&] { return "row " + std::to_string(row) + ", column " + std::to_string(column); };
    std::size_t b = 0;
    std::size_t e = cell.size();
    while (b < e && (cell[b] == ' ' || cell[b] == '\t')) ++b;
    while (e > b && (cell[e - 1] == ' ' || cell[e - 1] == '\t')) --e;
    if (b == e) throw ParseError("blank cell at " + where());
    const char* first = cell.data() + b;
    const char* last = cell.data() + e;
    if (*first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("non-numeric cell '" + std::string(cell) + "' at " + where());
    }
    if (!std::isfinite(value)) throw ParseError("non-finite cell '" + std::string(cell) + "' at " + where());
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream text;
    text << join(header) << '\n';
    for (const auto& row : rows) text << join(row) << '\n';
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text.str();
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const Eigen::MatrixXd& values) {
    if (static_cast<std::size_t>(values.cols()) != header.size()) {
        throw DimensionError("CSV header has " + std::to_string(header.size()) + " columns, matrix has " +
                             std::to_string(values.cols()));
    }
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        row.reserve(header.size());
        for (Eigen::Index j = 0; j < values.cols(); ++j) row.push_back(format_double(values(i, j)));
    }
    write_csv(path, header, rows);
}

std::vector<std::string> numbered_columns(std::string_view prefix, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) out.push_back(std::string(prefix) + std::to_string(k));
    return out;
}

}  // namespace funbench

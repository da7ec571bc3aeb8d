#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace funbench {

/// Raw comma-separated text: a header row followed by data rows. Quoting is
/// not supported; cells are taken verbatim between commas.
struct CsvText {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a file, stripping a trailing carriage return from each line and
/// skipping a final empty line. Throws IoError when the file cannot be
/// opened and SchemaError when it has no header.
CsvText read_csv(const std::string& path);

/// Parses one cell as a finite double. Blank, non-numeric and non-finite
/// cells raise ParseError naming the 1-based data row and column.
double parse_cell(std::string_view cell, std::size_t row, std::size_t column);

/// Shortest decimal text that reads back to exactly the same double.
std::string format_double(double value);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Writes a numeric matrix under a header, one matrix row per line.
void write_csv(const std::string& path, const std::vector<std::string>& header, const Eigen::MatrixXd& values);

/// "prefix1", ..., "prefixN".
std::vector<std::string> numbered_columns(std::string_view prefix, std::size_t count);

}  // namespace funbench

#include "funbench/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "funbench/csv.hpp"
#include "funbench/errors.hpp"
#include "funbench/rng.hpp"

namespace funbench {

namespace {

using Eigen::Index;

void check_header(const CsvText& csv, const std::vector<std::string>& expected, const std::string& path) {
    if (csv.header != expected) {
        std::string msg = "'" + path + "': header must be " + expected.front() + ".." + expected.back() + " (" +
                          std::to_string(expected.size()) + " columns), got " + std::to_string(csv.header.size()) +
                          " columns";
        for (std::size_t j = 0; j < std::min(csv.header.size(), expected.size()); ++j) {
            if (csv.header[j] != expected[j]) {
                msg += "; column " + std::to_string(j + 1) + " is '" + csv.header[j] + "', expected '" + expected[j] + "'";
                break;
            }
        }
        throw SchemaError(msg);
    }
}

Matrix parse_matrix(const CsvText& csv, const std::string& path, std::optional<std::size_t> expected_rows) {
    const std::size_t cols = csv.header.size();
    if (csv.rows.empty()) throw SchemaError("'" + path + "' has no data rows");
    if (expected_rows && csv.rows.size() != *expected_rows) {
        throw SchemaError("'" + path + "' has " + std::to_string(csv.rows.size()) + " data rows, expected " +
                          std::to_string(*expected_rows));
    }
    Matrix m(static_cast<Index>(csv.rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        if (row.size() != cols) {
            throw SchemaError("'" + path + "' row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                              " columns, expected " + std::to_string(cols));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = parse_cell(row[j], i + 1, j + 1);
        }
    }
    return m;
}

}  // namespace

TecatorData load_tecator(const std::string& path, std::optional<std::size_t> expected_rows) {
    const CsvText csv = read_csv(path);
    std::vector<std::string> expected = numbered_columns("ch", kTecatorChannels);
    expected.emplace_back("fat");
    check_header(csv, expected, path);
    const Matrix m = parse_matrix(csv, path, expected_rows);
    const Index channels = static_cast<Index>(kTecatorChannels);
    return {FunctionalDataset(Grid::uniform(kTecatorChannels), m.leftCols(channels)),
            ScalarResponses(m.col(channels))};
}

void save_tecator(const TecatorData& data, const std::string& path) {
    if (data.absorbance.length() != kTecatorChannels) throw DimensionError("Tecator absorbance must have 100 channels");
    if (data.fat.size() != data.absorbance.n()) throw DimensionError("fat and absorbance row counts differ");
    std::vector<std::string> header = numbered_columns("ch", kTecatorChannels);
    header.emplace_back("fat");
    Matrix all(data.absorbance.curves().rows(), static_cast<Index>(kTecatorChannels + 1));
    all << data.absorbance.curves(), data.fat.values;
    write_csv(path, header, all);
}

AemetData load_aemet(const std::string& temp_path, const std::string& precip_path,
                     std::optional<std::size_t> expected_rows) {
    const std::vector<std::string> expected = numbered_columns("d", kAemetDays);
    const CsvText temp_csv = read_csv(temp_path);
    check_header(temp_csv, expected, temp_path);
    const CsvText precip_csv = read_csv(precip_path);
    check_header(precip_csv, expected, precip_path);
    if (temp_csv.rows.size() != precip_csv.rows.size()) {
        throw SchemaError("temperature file has " + std::to_string(temp_csv.rows.size()) +
                          " rows but precipitation file has " + std::to_string(precip_csv.rows.size()));
    }
    const Matrix temp = parse_matrix(temp_csv, temp_path, expected_rows);
    Matrix precip = parse_matrix(precip_csv, precip_path, expected_rows);
    for (Index i = 0; i < precip.rows(); ++i) {
        for (Index j = 0; j < precip.cols(); ++j) {
            if (precip(i, j) < 0.0) {
                throw DataError("negative precipitation at row " + std::to_string(i + 1) + ", column " +
                                std::to_string(j + 1) + " of '" + precip_path + "'");
            }
            precip(i, j) = std::log1p(precip(i, j));
        }
    }
    const Grid grid = Grid::uniform(kAemetDays);
    return {FunctionalDataset(grid, temp), FunctionalDataset(grid, std::move(precip))};
}

void save_aemet(const AemetData& data, const std::string& temp_path, const std::string& precip_path) {
    const std::vector<std::string> header = numbered_columns("d", kAemetDays);
    write_csv(temp_path, header, data.temperature.curves());
    const Matrix raw = data.log_precip.curves().array().exp() - 1.0;
    write_csv(precip_path, header, raw);
}

std::vector<Split> make_splits(std::size_t n, const SplitProtocol& protocol) {
    if (protocol.n_train < 1 || protocol.n_test < 1) throw InvalidArgument("splits need nonempty train and test sets");
    if (protocol.n_train + protocol.n_test > n) {
        throw SizeError("n_train + n_test = " + std::to_string(protocol.n_train + protocol.n_test) +
                        " exceeds the " + std::to_string(n) + " available rows");
    }
    std::vector<Split> splits;
    splits.reserve(protocol.repeats);
    for (std::size_t r = 0; r < protocol.repeats; ++r) {
        Rng rng(derive_seed(protocol.seed, "split", r), static_cast<std::uint64_t>(StreamRole::Split));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));
        Split s;
        s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(protocol.n_train));
        s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(protocol.n_train),
                      order.begin() + static_cast<std::ptrdiff_t>(protocol.n_train + protocol.n_test));
        std::sort(s.train.begin(), s.train.end());
        std::sort(s.test.begin(), s.test.end());
        splits.push_back(std::move(s));
    }
    return splits;
}

}  // namespace funbench

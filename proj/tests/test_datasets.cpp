#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <doctest.h>

#include "funbench/csv.hpp"
#include "funbench/datasets.hpp"
#include "funbench/errors.hpp"
#include "support.hpp"

using namespace funbench;

namespace {

TecatorData fake_tecator(std::size_t n, std::uint64_t seed) {
    Matrix curves = testing::random_matrix(static_cast<Eigen::Index>(n), 100, seed).array() + 3.0;
    Vector fat = testing::random_vector(static_cast<Eigen::Index>(n), seed + 1, 10.0).array().abs();
    return {FunctionalDataset(Grid::uniform(100), curves), ScalarResponses(fat)};
}

AemetData fake_aemet(std::size_t n, std::uint64_t seed) {
    const Grid g = Grid::uniform(365);
    Matrix temp = testing::random_matrix(static_cast<Eigen::Index>(n), 365, seed, 5.0).array() + 15.0;
    Matrix precip = testing::random_matrix(static_cast<Eigen::Index>(n), 365, seed + 1).array().abs();
    precip.col(0).setZero();
    return {FunctionalDataset(g, temp), FunctionalDataset(g, precip.array().log1p().matrix())};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    return s;
}

/// Tecator-shaped text with `rows` rows where every value is 1.
std::string tecator_text(std::size_t rows, std::size_t channels = 100) {
    std::vector<std::string> header = numbered_columns("ch", channels);
    header.emplace_back("fat");
    std::string text = join(header) + "\n";
    for (std::size_t r = 0; r < rows; ++r) text += join(std::vector<std::string>(channels + 1, "1")) + "\n";
    return text;
}

template <typename E>
std::string error_text(auto&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("datasets") {

// ---------------------------------------------------------------------------
// CSV primitives

TEST_CASE("parse_cell accepts finite numbers and rejects everything else") {
    CHECK(parse_cell("1.5", 1, 1) == 1.5);
    CHECK(parse_cell("-2e-3", 1, 1) == -0.002);
    CHECK(parse_cell(" 7", 1, 1) == 7.0);
    CHECK_THROWS_AS(parse_cell("", 3, 4), ParseError);
    CHECK_THROWS_AS(parse_cell("abc", 3, 4), ParseError);
    CHECK_THROWS_AS(parse_cell("1.5x", 3, 4), ParseError);
    CHECK_THROWS_AS(parse_cell("nan", 3, 4), ParseError);
    CHECK_THROWS_AS(parse_cell("inf", 3, 4), ParseError);
    const std::string msg = error_text<ParseError>([] { parse_cell("", 3, 4); });
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("column 4") != std::string::npos);
}

TEST_CASE("format_double round-trips exactly") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const double v = testing::random_vector(1, seed, 1e3)[0] * std::pow(10.0, static_cast<double>(seed % 40) - 20.0);
        CHECK(parse_cell(format_double(v), 1, 1) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("read_csv strips carriage returns and reports missing files") {
    testing::TempDir dir("csv");
    write_text(dir.file("crlf.csv"), "a,b\r\n1,2\r\n3,4\r\n");
    const CsvText t = read_csv(dir.file("crlf.csv"));
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1] == std::vector<std::string>{"3", "4"});
    CHECK_THROWS_AS(read_csv(dir.file("missing.csv")), IoError);
    write_text(dir.file("empty.csv"), "");
    CHECK_THROWS_AS(read_csv(dir.file("empty.csv")), SchemaError);
}

TEST_CASE("matrix CSV round-trips bit for bit") {
    testing::TempDir dir("csv");
    const Matrix m = testing::random_matrix(4, 3, 5);
    write_csv(dir.file("m.csv"), numbered_columns("c", 3), m);
    const CsvText t = read_csv(dir.file("m.csv"));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(parse_cell(t.rows[i][j], i + 1, j + 1) == m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
}

// ---------------------------------------------------------------------------
// Tecator

TEST_CASE("well-formed Tecator file loads as 215 x 100") {
    testing::TempDir dir("tecator");
    const TecatorData data = fake_tecator(kTecatorRows, 7);
    save_tecator(data, dir.file("tecator.csv"));
    const TecatorData back = load_tecator(dir.file("tecator.csv"));
    CHECK(back.absorbance.n() == 215);
    CHECK(back.absorbance.length() == 100);
    CHECK(back.absorbance.grid() == Grid::uniform(100));
    CHECK(back.absorbance.curves() == data.absorbance.curves());
}

TEST_CASE("Tecator fat column round-trips through save and load") {
    testing::TempDir dir("tecator");
    const TecatorData data = fake_tecator(3, 8);
    save_tecator(data, dir.file("small.csv"));
    const TecatorData back = load_tecator(dir.file("small.csv"), std::nullopt);
    CHECK(back.fat.values == data.fat.values);
    CHECK_THROWS_AS(load_tecator(dir.file("small.csv")), SchemaError);
}

TEST_CASE("Tecator schema errors") {
    testing::TempDir dir("tecator");
    write_text(dir.file("narrow.csv"), tecator_text(3, 99));
    CHECK_THROWS_AS(load_tecator(dir.file("narrow.csv"), std::nullopt), SchemaError);

    // Header is fine but one data row is short.
    std::string text = tecator_text(3);
    const auto last_comma = text.rfind(',');
    text.erase(last_comma, 2);
    write_text(dir.file("short_row.csv"), text);
    const std::string msg = error_text<SchemaError>([&] { load_tecator(dir.file("short_row.csv"), std::nullopt); });
    CHECK(msg.find("row 3") != std::string::npos);
}

TEST_CASE("Tecator blank and non-numeric cells name their location") {
    testing::TempDir dir("tecator");
    std::string text = tecator_text(2);
    const auto second_row = text.find('\n', text.find('\n') + 1) + 1;
    text.replace(second_row, 1, "x");
    write_text(dir.file("bad.csv"), text);
    const std::string msg = error_text<ParseError>([&] { load_tecator(dir.file("bad.csv"), std::nullopt); });
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);

    std::string blank = tecator_text(1);
    blank.replace(blank.find("\n") + 1, 1, "");
    write_text(dir.file("blank.csv"), blank);
    CHECK_THROWS_AS(load_tecator(dir.file("blank.csv"), std::nullopt), ParseError);
}

// ---------------------------------------------------------------------------
// Aemet

TEST_CASE("well-formed Aemet files load as 73 x 365 with log precipitation") {
    testing::TempDir dir("aemet");
    const AemetData data = fake_aemet(kAemetRows, 9);
    save_aemet(data, dir.file("temp.csv"), dir.file("precip.csv"));
    const AemetData back = load_aemet(dir.file("temp.csv"), dir.file("precip.csv"));
    CHECK(back.temperature.n() == 73);
    CHECK(back.temperature.length() == 365);
    CHECK(back.log_precip.n() == 73);
    CHECK(back.log_precip.length() == 365);
    CHECK(back.log_precip.curves().col(0).isZero(0.0));
    CHECK((back.log_precip.curves() - data.log_precip.curves()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero raw precipitation becomes zero") {
    testing::TempDir dir("aemet");
    const std::string header = join(numbered_columns("d", 365)) + "\n";
    const std::string zeros = join(std::vector<std::string>(365, "0")) + "\n";
    write_text(dir.file("t.csv"), header + zeros);
    write_text(dir.file("p.csv"), header + zeros);
    const AemetData d = load_aemet(dir.file("t.csv"), dir.file("p.csv"), std::nullopt);
    CHECK(d.log_precip.curves().isZero(0.0));
}

TEST_CASE("Aemet errors") {
    testing::TempDir dir("aemet");
    const std::string header = join(numbered_columns("d", 365)) + "\n";
    const std::string ones = join(std::vector<std::string>(365, "1")) + "\n";
    write_text(dir.file("t2.csv"), header + ones + ones);
    write_text(dir.file("p1.csv"), header + ones);
    CHECK_THROWS_AS(load_aemet(dir.file("t2.csv"), dir.file("p1.csv"), std::nullopt), SchemaError);

    std::vector<std::string> cells(365, "1");
    cells[10] = "-0.5";
    write_text(dir.file("neg.csv"), header + ones + join(cells) + "\n");
    const std::string msg =
        error_text<DataError>([&] { load_aemet(dir.file("t2.csv"), dir.file("neg.csv"), std::nullopt); });
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 11") != std::string::npos);

    write_text(dir.file("short.csv"), join(numbered_columns("d", 364)) + "\n");
    CHECK_THROWS_AS(load_aemet(dir.file("short.csv"), dir.file("p1.csv"), std::nullopt), SchemaError);
}

// ---------------------------------------------------------------------------
// Splits

TEST_CASE("Tecator protocol splits") {
    const auto splits = make_splits(kTecatorRows, SplitProtocol::tecator(3));
    REQUIRE(splits.size() == 10);
    for (const auto& s : splits) {
        CHECK(s.train.size() == 200);
        CHECK(s.test.size() == 15);
        std::vector<std::size_t> both;
        std::set_intersection(s.train.begin(), s.train.end(), s.test.begin(), s.test.end(), std::back_inserter(both));
        CHECK(both.empty());
        CHECK(std::is_sorted(s.train.begin(), s.train.end()));
        CHECK(s.test.back() < kTecatorRows);
    }
    CHECK(splits[0].test != splits[1].test);
}

TEST_CASE("Aemet protocol splits") {
    const auto splits = make_splits(kAemetRows, SplitProtocol::aemet(3));
    REQUIRE(splits.size() == 10);
    for (const auto& s : splits) {
        CHECK(s.train.size() == 65);
        CHECK(s.test.size() == 8);
        std::set<std::size_t> all(s.train.begin(), s.train.end());
        all.insert(s.test.begin(), s.test.end());
        CHECK(all.size() == 73);
    }
}

TEST_CASE("splits are deterministic per seed and never overlap") {
    const SplitProtocol p{30, 12, 25, 44};
    const auto a = make_splits(50, p);
    const auto b = make_splits(50, p);
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].train == b[r].train);
        CHECK(a[r].test == b[r].test);
        std::set<std::size_t> all(a[r].train.begin(), a[r].train.end());
        all.insert(a[r].test.begin(), a[r].test.end());
        CHECK(all.size() == 42);
    }
    CHECK(make_splits(50, SplitProtocol{30, 12, 1, 45})[0].train != a[0].train);
}

TEST_CASE("oversized protocol is a size error") {
    CHECK_THROWS_AS(make_splits(214, SplitProtocol::tecator(1)), SizeError);
    CHECK_THROWS_AS(make_splits(10, SplitProtocol{0, 5, 1, 1}), InvalidArgument);
}

}  // TEST_SUITE

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "casdec/io.hpp"

using namespace casdec;
namespace fs = std::filesystem;

TEST_CASE("17 significant digits round-trip every double") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("CSV write/read round trip, parent directories created") {
    auto dir = fs::temp_directory_path() / "casdec_io_test" / "nested";
    fs::remove_all(dir.parent_path());
    io::write_csv(dir / "t.csv", {"a", "b"}, {{1.0, 2.0}, {1.0 / 3.0, -4e-20}});
    auto t = io::read_csv(dir / "t.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][0] == 1.0 / 3.0);
    CHECK(t.rows[1][1] == -4e-20);

    std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    io::write_csv_columns(dir / "c.csv", {"x", "y"}, {&x, &y});
    auto c = io::read_csv(dir / "c.csv");
    CHECK(c.rows.size() == 3);
    CHECK(c.rows[2][1] == 6.0);
    fs::remove_all(dir.parent_path());
}

TEST_CASE("column length mismatch is an error") {
    std::vector<double> x{1, 2}, y{1};
    auto p = fs::temp_directory_path() / "casdec_bad.csv";
    CHECK_THROWS(io::write_csv_columns(p, {"x", "y"}, {&x, &y}));
}

TEST_CASE("JSON round trip and non-finite numbers") {
    auto p = fs::temp_directory_path() / "casdec_io_test.json";
    nlohmann::json j{{"a", 1.5}, {"b", io::number_or_null(std::numeric_limits<double>::infinity())}};
    io::write_json(p, j);
    auto back = io::read_json(p);
    CHECK(back["a"].get<double>() == 1.5);
    CHECK(back["b"].is_null());
    CHECK(io::number_or_null(2.0).get<double>() == 2.0);
    fs::remove(p);
    CHECK_THROWS(io::read_json(p));
}

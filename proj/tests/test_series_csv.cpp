#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "irfkit/csv.hpp"
#include "irfkit/errors.hpp"
#include "irfkit/rng.hpp"
#include "irfkit/series.hpp"

using namespace irfkit;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("series validation") {
    CHECK_THROWS_AS(Series("x", {}), StructuralError);
    CHECK_THROWS_AS(Series("x", {1.0, std::nan("")}), StructuralError);
    CHECK_THROWS_AS(Series("x", {1.0, 2.0}, std::vector<std::string>{"1"}), StructuralError);
    // numeric labels must increase
    CHECK_THROWS_AS(Series("x", {1.0, 2.0}, std::vector<std::string>{"2", "1"}), StructuralError);
    // opaque labels only need to be unique
    CHECK_NOTHROW(Series("x", {1.0, 2.0}, std::vector<std::string>{"b", "a"}));
    CHECK_THROWS_AS(Series("x", {1.0, 2.0}, std::vector<std::string>{"a", "a"}), StructuralError);
}

TEST_CASE("load_csv: series collection") {
    const std::string path = temp_file("irfkit_basic.csv");
    write_file(path, "t,x\n1,1.0\n2,2.0\n3,3.0\n");
    CsvSchema schema;
    schema.period = "t";
    auto result = load_csv(path, schema);
    const auto& table = std::get<SeriesTable>(result);
    REQUIRE(table.series.size() == 1);
    CHECK(table.series[0].name() == "x");
    CHECK(table.series[0].values() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(*table.series[0].periods() == std::vector<std::string>{"1", "2", "3"});
    CHECK(table.rows_dropped == 0);
}

TEST_CASE("load_csv: panel with entity column") {
    const std::string path = temp_file("irfkit_panel.csv");
    write_file(path, "entity,t,v\nA,1,0.5\nA,2,0.7\nA,3,0.2\nB,1,1.5\nB,2,1.7\nB,3,1.2\n");
    CsvSchema schema;
    schema.period = "t";
    schema.entity = "entity";
    auto result = load_csv(path, schema);
    const auto& pt = std::get<PanelTable>(result);
    CHECK(pt.panel.entities() == std::vector<std::string>{"A", "B"});
    CHECK(pt.panel.balanced());
    CHECK(pt.panel.at("B", "v").values() == std::vector<double>{1.5, 1.7, 1.2});
}

TEST_CASE("load_csv: malformed cell names the row") {
    const std::string path = temp_file("irfkit_bad.csv");
    write_file(path, "t,x\n1,1.0\n2,abc\n3,3.0\n");
    CsvSchema schema;
    schema.period = "t";
    try {
        load_csv(path, schema, NaPolicy::reject);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }
}

TEST_CASE("load_csv: missing cells per policy") {
    const std::string path = temp_file("irfkit_na.csv");
    write_file(path, "t,x,w\n1,1.0,4\n2,NA,5\n3,3.0,6\n");
    CsvSchema schema;
    schema.period = "t";
    CHECK_THROWS_AS(load_csv(path, schema, NaPolicy::reject), IngestionError);
    auto result = load_csv(path, schema, NaPolicy::drop_rows);
    const auto& table = std::get<SeriesTable>(result);
    CHECK(table.rows_dropped == 1);
    // full row removed, both columns keep alignment
    CHECK(table.series[0].values() == std::vector<double>{1.0, 3.0});
    CHECK(table.series[1].values() == std::vector<double>{4.0, 6.0});
}

TEST_CASE("load_csv: duplicate (entity, period) is structural") {
    const std::string path = temp_file("irfkit_dup.csv");
    write_file(path, "entity,t,v\nA,1,0.5\nA,1,0.7\nA,3,0.2\nB,1,1.5\nB,2,1.7\nB,3,1.2\n");
    CsvSchema schema;
    schema.period = "t";
    schema.entity = "entity";
    CHECK_THROWS_AS(load_csv(path, schema), StructuralError);
}

TEST_CASE("csv round trip preserves doubles exactly") {
    Rng rng(7);
    std::vector<double> v1(257), v2(257);
    for (auto& v : v1) v = rng.next_normal() * 1e-7;
    for (auto& v : v2) v = rng.next_normal() * 1e13;
    std::vector<std::string> periods;
    for (int i = 0; i < 257; ++i) periods.push_back(std::to_string(i + 1));
    std::vector<Series> original{Series("a", v1, periods), Series("b", v2, periods)};

    const std::string path = temp_file("irfkit_roundtrip.csv");
    write_csv(path, original, {"fixture"});
    CsvSchema schema;
    schema.period = "period";
    auto result = load_csv(path, schema);
    const auto& table = std::get<SeriesTable>(result);
    REQUIRE(table.series.size() == 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t t = 0; t < 257; ++t)
            CHECK(table.series[j][t] == original[j][t]);  // bit-exact
}

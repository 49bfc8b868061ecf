// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "distmimo/results.hpp"

using namespace distmimo;

namespace {

ResultTable sample_table() {
    ResultTable t;
    t.columns = {"k", "se"};
    t.metadata["seed"] = 42;
    t.metadata["version"] = "test";
    t.add_row({1.0, 0.5});
    t.add_row({2.0, 1.25e-17});
    t.add_row({3.0, -7.0});
    return t;
}

}  // namespace

TEST_CASE("JSON round trip preserves the table") {
    const ResultTable t = sample_table();
    const ResultTable back = results_from_json(results_to_json(t));
    CHECK(back == t);
}

TEST_CASE("CSV has metadata comments, a header, and parseable numbers") {
    const std::string csv = results_to_csv(sample_table());
    std::istringstream in(csv);
    std::string line;
    int comments = 0;
    bool header_seen = false;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            CHECK(!header_seen);  // metadata precedes the header
            ++comments;
            continue;
        }
        if (!header_seen) {
            CHECK(line == "k,se");
            header_seen = true;
            continue;
        }
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        int n = 0;
        while (std::getline(cells, cell, ',')) {
            size_t pos = 0;
            const double v = std::stod(cell, &pos);
            CHECK(pos == cell.size());
            CHECK(std::isfinite(v));
            CHECK(cell.find(',') == std::string::npos);
            ++n;
        }
        CHECK(n == 2);
    }
    CHECK(comments == 2);
    CHECK(rows == 3);
}

TEST_CASE("CSV keeps full double precision") {
    ResultTable t;
    t.columns = {"x"};
    const double v = 0.1234567890123456789;
    t.add_row({v});
    const std::string csv = results_to_csv(t);
    const auto pos = csv.rfind('\n', csv.size() - 2);
    CHECK(std::stod(csv.substr(pos + 1)) == v);
}

TEST_CASE("empty table serializes to header plus metadata") {
    ResultTable t;
    t.columns = {"a", "b"};
    t.metadata["note"] = "none";
    const std::string csv = results_to_csv(t);
    CHECK(csv == "# note: \"none\"\na,b\n");
}

TEST_CASE("row width mismatches are rejected") {
    ResultTable t;
    t.columns = {"a", "b"};
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
    nlohmann::json j = results_to_json(sample_table());
    j["rows"][0] = {1.0};
    CHECK_THROWS_AS(results_from_json(j), std::invalid_argument);
}

TEST_CASE("write_results writes both formats and surfaces I/O errors") {
    const ResultTable t = sample_table();
    const std::string base = "results_test_tmp";
    write_results(t, base + ".json", "json");
    std::ifstream jf(base + ".json");
    nlohmann::json j;
    jf >> j;
    CHECK(results_from_json(j) == t);
    write_results(t, base + ".csv", "csv");
    std::ifstream cf(base + ".csv");
    CHECK(cf.good());
    std::remove((base + ".json").c_str());
    std::remove((base + ".csv").c_str());
    CHECK_THROWS_AS(write_results(t, base + ".csv", "xml"), std::invalid_argument);
    CHECK_THROWS_AS(write_results(t, "/nonexistent-dir/x.csv", "csv"),
                    std::runtime_error);
}

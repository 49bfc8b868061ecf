// SPDX-License-Identifier: Apache-2.0

#include "distmimo/results.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace distmimo {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("result table: row width does not match columns");
    rows.push_back(std::move(row));
}

std::string results_to_csv(const ResultTable& table) {
    std::ostringstream out;
    for (auto it = table.metadata.begin(); it != table.metadata.end(); ++it)
        out << "# " << it.key() << ": " << it.value().dump() << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    char buf[40];
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json results_to_json(const ResultTable& table) {
    nlohmann::json j;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    j["metadata"] = table.metadata;
    return j;
}

ResultTable results_from_json(const nlohmann::json& j) {
    ResultTable t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    t.metadata = j.at("metadata");
    for (const auto& row : t.rows)
        if (row.size() != t.columns.size())
            throw std::invalid_argument("result table: inconsistent row width in JSON");
    return t;
}

void write_results(const ResultTable& table, const std::string& path,
                   const std::string& format) {
    if (format != "csv" && format != "json")
        throw std::invalid_argument("write results: format must be csv or json");
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("write results: cannot open '" + path + "' for writing");
    if (format == "csv")
        f << results_to_csv(table);
    else
        f << results_to_json(table).dump(2) << "\n";
    if (!f)
        throw std::runtime_error("write results: error while writing '" + path + "'");
}

}  // namespace distmimo

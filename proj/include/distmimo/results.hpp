// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace distmimo {

/// Tabular experiment output: named numeric columns plus free-form
/// metadata (config hash, seed, version, notes).
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json metadata = nlohmann::json::object();

    void add_row(std::vector<double> row);

    bool operator==(const ResultTable& other) const {
        return columns == other.columns && rows == other.rows &&
               metadata == other.metadata;
    }
};

/// format is "csv" or "json". CSV carries the metadata as '#'-prefixed
/// comment lines before the header row; JSON mirrors columns/rows/metadata.
void write_results(const ResultTable& table, const std::string& path,
                   const std::string& format);

std::string results_to_csv(const ResultTable& table);
nlohmann::json results_to_json(const ResultTable& table);
ResultTable results_from_json(const nlohmann::json& j);

}  // namespace distmimo

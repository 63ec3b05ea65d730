// io.hpp: CSV and JSON output helpers

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace casdec::io {

// 17 significant digits, round-trips any double.
std::string format_double(double v);

// Writes a CSV with the given header; every row must match the header width.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Column-major variant: columns[j][i] is row i of column j.
void write_csv_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<const std::vector<double>*>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// JSON has no inf/nan; such values are written as null.
nlohmann::json number_or_null(double v);

}  // namespace casdec::io

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "comanip/stats.hpp"

namespace comanip::io {

/// Shortest decimal representation that round-trips the exact double value.
std::string format_double(double v);

/// RFC-4180 quoting: wraps the field in quotes when it contains a comma,
/// quote, or newline, doubling embedded quotes.
std::string csv_quote(const std::string& field);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);

/// Write a file atomically: stream to <path>.tmp in the same directory, then
/// rename over the target.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

void write_csv(const CsvTable& table, const std::filesystem::path& path);

void export_csv(const CategoryStatsTable& table, const std::filesystem::path& path);
void export_csv(const CircularDensity& density, const std::filesystem::path& path);
void export_csv(const Histogram& histogram, const std::filesystem::path& path);

} // namespace comanip::io

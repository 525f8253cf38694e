#include "comanip/csv.hpp"

#include <charconv>
#include <fstream>

#include "comanip/errors.hpp"

namespace comanip::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_quote(row[i]);
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw_error(Errc::Io, "cannot open for writing: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw_error(Errc::Io, "write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw_error(Errc::Io, "rename failed for " + path.string() + ": " + ec.message());
    }
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
    atomic_write_text(path, to_csv(table));
}

void export_csv(const CategoryStatsTable& table, const std::filesystem::path& path) {
    CsvTable t;
    t.header = {"category", "percent_time", "mean_abs_accel_mps2", "mean_signed_accel_mps2",
                "sample_count"};
    for (const auto& row : table.rows) {
        t.rows.push_back({category_name(row.category), format_double(row.percent_time),
                          format_double(row.mean_abs_accel), format_double(row.mean_signed_accel),
                          std::to_string(row.sample_count)});
    }
    write_csv(t, path);
}

void export_csv(const CircularDensity& density, const std::filesystem::path& path) {
    CsvTable t;
    t.header = {"bin_lo_deg", "bin_hi_deg", "count", "frequency"};
    for (std::size_t k = 0; k < density.counts.size(); ++k) {
        t.rows.push_back({format_double(static_cast<double>(k) * density.bin_deg),
                          format_double(static_cast<double>(k + 1) * density.bin_deg),
                          std::to_string(density.counts[k]), format_double(density.frequency[k])});
    }
    write_csv(t, path);
}

void export_csv(const Histogram& histogram, const std::filesystem::path& path) {
    CsvTable t;
    t.header = {"bin_lo", "bin_hi", "count"};
    for (std::size_t k = 0; k < histogram.counts.size(); ++k) {
        const double lo = histogram.spec.lo + static_cast<double>(k) * histogram.spec.bin_width;
        double hi = histogram.spec.lo + static_cast<double>(k + 1) * histogram.spec.bin_width;
        if (hi > histogram.spec.hi) hi = histogram.spec.hi;
        t.rows.push_back({format_double(lo), format_double(hi),
                          std::to_string(histogram.counts[k])});
    }
    write_csv(t, path);
}

} // namespace comanip::io

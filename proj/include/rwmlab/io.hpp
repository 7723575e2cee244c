#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwmlab {

// Round-trip-exact, locale-independent formatting; identical doubles always
// produce identical bytes, which is what the reproducibility contract needs.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Writes header + rows; throws std::runtime_error on I/O failure.
void write_csv(const std::string& path, const CsvTable& table);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// FNV-1a over the bytes, hex-encoded; used to fingerprint configs.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace rwmlab

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace regimecast {

// Minimal CSV support: header row, comma separation, double quotes around
// fields that contain commas. Lines starting with '#' are treated as comments.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_numbers;  // 1-based line number in the file

  // Index of a header column, or npos.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv(std::istream& in, const std::string& what);

std::vector<std::string> split_csv_line(const std::string& line);

// FNV-1a 64-bit, used for input checksums and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t n,
                    std::uint64_t h = 14695981039346656037ULL);
std::uint64_t fnv1a_file(const std::string& path);

std::string format_double(double x);  // shortest round-trip form

}  // namespace regimecast

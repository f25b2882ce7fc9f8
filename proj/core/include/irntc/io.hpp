#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irntc {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

// Shortest round-trip decimal representation with `sig` significant digits;
// deterministic across runs (no locale).
std::string format_g(double v, int sig = 12);

// "19+4+4+4+8" for schedule increments.
std::string join_increments(const std::vector<int>& inc);

// Writes header + rows, comma-separated, LF line endings; throws on I/O error
// or when a row width disagrees with the header.
void write_csv(const CsvTable&, const std::string& path);
void write_csv(const CsvTable&, std::ostream&);

}  // namespace irntc

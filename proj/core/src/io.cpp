#include "irntc/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace irntc {

void CsvTable::add_row(std::vector<std::string> row) {
  if (!header.empty() && row.size() != header.size())
    throw std::invalid_argument("CsvTable: row width differs from header");
  rows.push_back(std::move(row));
}

std::string format_g(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

std::string join_increments(const std::vector<int>& inc) {
  std::string out;
  for (size_t i = 0; i < inc.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(inc[i]);
  }
  return out;
}

void write_csv(const CsvTable& t, std::ostream& os) {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    line(r);
  }
  os.flush();
}

void write_csv(const CsvTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(t, f);
  if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace irntc

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace twotime::cli {

// Full round-trip decimal image of a double (17 significant digits), so
// a parsed copy of any emitted table reproduces the exact bit pattern.
std::string format_double(double v);
std::string format_int(std::int64_t v);

// Minimal in-memory CSV table with a fixed header. Result tables are
// small (scan rows, set pairs); building in memory keeps emission
// all-or-nothing. No timestamps or other run-variant content belongs in
// a CSV: equal seeds must give byte-identical files.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> cells);  // size must match header
  int rows() const { return static_cast<int>(rows_.size()); }
  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace twotime::cli

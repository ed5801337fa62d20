#include "twotime/cli/table.hpp"

#include <cstdio>
#include <fstream>

#include "twotime/errors.hpp"

namespace twotime::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

namespace {

// Quote a field only when it contains delimiter, quote or newline; our
// own column values never do, but set names come from the user.
std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) {
    throw InvalidArgument("cli", "CsvTable.header", "header must be non-empty");
  }
}

CsvTable& CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw InternalInconsistency("cli", "CsvTable.add_row",
                                "row width " + std::to_string(cells.size()) +
                                    " != header width " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += escape(header_[i]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  write_text_file(path, to_string());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) {
    throw InvalidArgument("cli", "output", "cannot write \"" + path.string() + "\"");
  }
  out << content;
  if (!out) {
    throw InvalidArgument("cli", "output", "write failed for \"" + path.string() + "\"");
  }
}

}  // namespace twotime::cli

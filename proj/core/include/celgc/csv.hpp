#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace celgc {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// One CSV cell; empty optional renders as an empty cell (the "never reached"
/// marker).
std::string format_optional(std::optional<long> v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  /// Serializes with LF line endings; output is a pure function of the rows.
  std::string str() const;
  void write_file(const std::string& path) const;

  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Minimal reader for files produced by CsvWriter (no quoting/escaping).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv_file(const std::string& path);

}  // namespace celgc

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chargeaudit::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines. CRLF and LF line endings are accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record. Returns false at end of input.
  bool next(Row& row);

  /// 1-based physical line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

// Header-indexed view over a table read fully into memory.
class Table {
 public:
  static Table read(std::istream& in);
  static Table read_file(const std::string& path);

  const Row& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t line(std::size_t i) const { return lines_[i]; }

  std::optional<std::size_t> column(std::string_view name) const;

  /// Throws SchemaError listing every missing column.
  void require(const std::vector<std::string>& names, std::string_view what) const;

  /// Field value, or empty when the column is absent or the row is short.
  std::string_view get(std::size_t row, std::string_view column) const;

 private:
  Row header_;
  std::vector<Row> rows_;
  std::vector<std::size_t> lines_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string quote(std::string_view field);

void write_row(std::ostream& out, const Row& row);

}  // namespace chargeaudit::csv

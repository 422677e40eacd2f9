#include "csv.hpp"

#include <fstream>

#include "errors.hpp"

namespace chargeaudit::csv {

bool Reader::next(Row& row) {
  row.clear();
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      row.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // swallow; LF terminates
    } else if (ch == '\n') {
      ++line_;
      row.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
      field_started = true;
    }
  }
}

Table Table::read(std::istream& in) {
  Table t;
  Reader reader(in);
  Row row;
  if (!reader.next(row)) return t;
  if (!row.empty() && row[0].rfind("\xEF\xBB\xBF", 0) == 0) row[0].erase(0, 3);
  t.header_ = row;
  for (std::size_t i = 0; i < t.header_.size(); ++i) t.index_.emplace(t.header_[i], i);
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    t.rows_.push_back(row);
    t.lines_.push_back(reader.line());
  }
  return t;
}

Table Table::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read(in);
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Table::require(const std::vector<std::string>& names, std::string_view what) const {
  std::string missing;
  for (const auto& n : names) {
    if (!column(n)) {
      if (!missing.empty()) missing += ", ";
      missing += n;
    }
  }
  if (!missing.empty()) {
    throw SchemaError(std::string(what) + ": missing required column(s): " + missing);
  }
}

std::string_view Table::get(std::size_t row, std::string_view name) const {
  auto col = column(name);
  if (!col) return {};
  const Row& r = rows_[row];
  if (*col >= r.size()) return {};
  return r[*col];
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

}  // namespace chargeaudit::csv

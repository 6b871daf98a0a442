#include "hhc/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hhc/errors.hpp"

namespace hhc::csv {

namespace {

std::string where(const Table& t, std::size_t row) {
  return t.path + ":" + std::to_string(t.lines.at(row));
}

// Splits one logical CSV record. `line` already has the trailing newline and
// any \r stripped. Returns false when a quoted field is left open, in which
// case the caller must append the next physical line and retry.
bool split_record(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) return false;
  out.push_back(field);
  return true;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InputError(path + ": missing required column '" + name + "'");
}

Table read(std::istream& in, const std::string& path) {
  Table t;
  t.path = path;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    const std::size_t start_line = ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    while (!split_record(line, fields)) {
      std::string next;
      if (!std::getline(in, next))
        throw InputError(path + ":" + std::to_string(start_line) +
                         ": unterminated quoted field");
      ++lineno;
      if (!next.empty() && next.back() == '\r') next.pop_back();
      line += '\n';
      line += next;
    }
    if (t.header.empty() && start_line == 1) {
      if (fields.size() == 1 && fields[0].empty())
        throw InputError(path + ": empty header row");
      t.header = fields;
      continue;
    }
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != t.header.size())
      throw InputError(path + ":" + std::to_string(start_line) + ": expected " +
                       std::to_string(t.header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    t.rows.push_back(fields);
    t.lines.push_back(start_line);
  }
  if (t.header.empty()) throw InputError(path + ": empty file");
  return t;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read(in, path);
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

double to_double(const Table& t, std::size_t row, std::size_t col) {
  const std::string& s = t.rows.at(row).at(col);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InputError(where(t, row) + ": invalid number '" + s + "' in column '" +
                     t.header.at(col) + "'");
  return v;
}

std::int64_t to_int(const Table& t, std::size_t row, std::size_t col) {
  const std::string& s = t.rows.at(row).at(col);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InputError(where(t, row) + ": invalid integer '" + s +
                     "' in column '" + t.header.at(col) + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hhc::csv

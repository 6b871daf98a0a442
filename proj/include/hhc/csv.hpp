#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hhc::csv {

/// One parsed CSV file: header row plus data rows, with the 1-based source
/// line of every row retained for error messages.
struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  /// Index of a header column; throws InputError if absent.
  std::size_t column(const std::string& name) const;
};

/// Parse a CSV stream. Supports quoted fields with "" escapes; rows must all
/// have the header's field count. `path` is used only in error messages.
Table read(std::istream& in, const std::string& path);

/// Parse a CSV file from disk; throws InputError if it cannot be opened.
Table read_file(const std::string& path);

/// Quote a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

/// Write one CSV row (escaped, comma-joined, newline-terminated).
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Strict double parse of a whole field; throws InputError with file:line.
double to_double(const Table& t, std::size_t row, std::size_t col);

/// Strict integer parse of a whole field; throws InputError with file:line.
std::int64_t to_int(const Table& t, std::size_t row, std::size_t col);

/// Format a double with enough digits to round-trip exactly.
std::string format_double(double v);

}  // namespace hhc::csv

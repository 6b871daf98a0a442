#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "hhc/csv.hpp"
#include "hhc/errors.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("reads header and rows with line numbers") {
  const auto p = temp_file("csv_basic.csv", "a,b,c\n1,2,3\n4,5,6\n");
  const hhc::csv::Table t = hhc::csv::read_file(p.string());
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][2] == "6");
  CHECK(t.lines[0] == 2);
  CHECK(t.lines[1] == 3);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS((void)t.column("missing"), hhc::InputError);
}

TEST_CASE("handles quoted fields, embedded separators and newlines") {
  const auto p = temp_file("csv_quoted.csv",
                           "name,note\n\"a,b\",\"line1\nline2\"\nplain,\"\"\"q\"\"\"\n");
  const hhc::csv::Table t = hhc::csv::read_file(p.string());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "a,b");
  CHECK(t.rows[0][1] == "line1\nline2");
  CHECK(t.rows[1][1] == "\"q\"");
}

TEST_CASE("strips CR and skips blank lines") {
  const auto p = temp_file("csv_crlf.csv", "a,b\r\n1,2\r\n\r\n3,4\r\n");
  const hhc::csv::Table t = hhc::csv::read_file(p.string());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "2");
  CHECK(t.rows[1][0] == "3");
}

TEST_CASE("rejects ragged rows, empty input, missing file") {
  const auto ragged = temp_file("csv_ragged.csv", "a,b\n1\n");
  CHECK_THROWS_AS((void)hhc::csv::read_file(ragged.string()), hhc::InputError);
  const auto empty = temp_file("csv_empty.csv", "");
  CHECK_THROWS_AS((void)hhc::csv::read_file(empty.string()), hhc::InputError);
  CHECK_THROWS_AS((void)hhc::csv::read_file("/nonexistent/x.csv"),
                  hhc::InputError);
}

TEST_CASE("numeric parsing is strict and errors carry location") {
  const auto p = temp_file("csv_num.csv", "v\n12.5\nnope\n");
  const hhc::csv::Table t = hhc::csv::read_file(p.string());
  CHECK(hhc::csv::to_double(t, 0, 0) == 12.5);
  try {
    (void)hhc::csv::to_double(t, 1, 0);
    FAIL("expected InputError");
  } catch (const hhc::InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("csv_num.csv") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
    CHECK(msg.find("v") != std::string::npos);
  }
  CHECK_THROWS_AS((void)hhc::csv::to_int(t, 0, 0), hhc::InputError);
}

TEST_CASE("escape round-trips through the reader") {
  std::vector<std::vector<std::string>> rows = {
      {"plain", "with,comma", "with\"quote"},
      {"multi\nline", "", "trailing space "},
  };
  std::string body = "c1,c2,c3\n";
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ',';
      line += hhc::csv::escape(r[i]);
    }
    body += line + "\n";
  }
  const auto p = temp_file("csv_roundtrip.csv", body);
  const hhc::csv::Table t = hhc::csv::read_file(p.string());
  REQUIRE(t.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(t.rows[i] == rows[i]);
}

TEST_CASE("format_double survives a text round trip bit for bit") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> mag(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double v = std::ldexp(mag(eng), (int)(eng() % 40) - 20);
    const std::string s = hhc::csv::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(hhc::csv::format_double(0.25) == "0.25");
}

}  // TEST_SUITE

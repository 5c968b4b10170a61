#pragma once

// Locale-independent CSV reading and writing with LF line endings.

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radiso::csv {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format(double value);
// Strict decimal parse of a whole field (surrounding blanks allowed).
// Throws ParseError.
double parse(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Reads a numeric CSV whose header must equal `expected_header` when it is
// nonempty. Blank lines are skipped; CRLF is accepted.
// Throws IoError when the file cannot be read and ParseError on bad content.
Table read(const std::filesystem::path& path, std::span<const std::string> expected_header = {});

class Writer {
 public:
  // Throws IoError when the file cannot be created.
  Writer(const std::filesystem::path& path, std::span<const std::string> header);
  void row(std::span<const double> values);
  // Flushes and throws IoError if any write failed.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string line_;
};

}  // namespace radiso::csv

#include "radiso/csv.hpp"

#include <charconv>
#include <cmath>

#include "radiso/errors.hpp"

namespace radiso::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError("not a decimal number: '" + std::string(field) + "'");
  }
  return value;
}

Table read(const std::filesystem::path& path, std::span<const std::string> expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    if (!have_header) {
      have_header = true;
      for (auto f : fields) table.header.emplace_back(f);
      if (!expected_header.empty() &&
          !std::equal(table.header.begin(), table.header.end(), expected_header.begin(),
                      expected_header.end())) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw ParseError(path.string() + ": expected header '" + want + "'");
      }
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    try {
      for (auto f : fields) row.push_back(parse(f));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    table.rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  if (!have_header) throw ParseError(path.string() + ": empty file");
  return table;
}

Writer::Writer(const std::filesystem::path& path, std::span<const std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot create " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void Writer::row(std::span<const double> values) {
  line_.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line_ += ',';
    line_ += format(values[i]);
  }
  line_ += '\n';
  out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
}

void Writer::close() {
  out_.flush();
  if (!out_) throw IoError("write failed: " + path_.string());
  out_.close();
}

}  // namespace radiso::csv

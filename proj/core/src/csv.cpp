#include "silt/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace silt {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void CsvWriter::comment(std::string_view text) {
  if (row_open_) end_row();
  os_ << "# " << text << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) cell(std::string_view(c));
  end_row();
}

void CsvWriter::separator() {
  if (row_open_) os_ << ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double x) {
  separator();
  os_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
  separator();
  os_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  os_ << text;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_open_ = false;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace silt

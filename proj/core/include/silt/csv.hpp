#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace silt {

/// Shortest round-trip is not enough for byte-stable diffs across builds, so
/// floats are always written with 17 significant digits.
std::string format_double(double x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Comma-separated writer with LF line endings. Comment lines start with '#'.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);

  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(std::size_t x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  void separator();

  std::ostream& os_;
  bool row_open_ = false;
};

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace silt

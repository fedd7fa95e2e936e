#include "silt/path.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "silt/csv.hpp"
#include "silt/errors.hpp"
#include "silt/rng.hpp"

namespace silt {

Path::Path(std::size_t m, int d, std::vector<double> values, std::uint64_t seed)
    : m_(m), d_(d), values_(std::move(values)), seed_(seed) {
  if (m_ == 0) throw DomainError("Path: m must be >= 1");
  if (d_ < 1) throw DomainError("Path: d must be >= 1");
  if (values_.size() != (m_ + 1) * static_cast<std::size_t>(d_)) {
    throw DomainError("Path: expected one value per grid node");
  }
  for (int i = 0; i < d_; ++i) {
    if (values_[static_cast<std::size_t>(i)] != 0.0) throw DomainError("Path: must start at the origin");
  }
}

void Path::at(double t, std::span<double> out) const {
  const double x = std::clamp(t, 0.0, 1.0) * static_cast<double>(m_);
  std::size_t k = static_cast<std::size_t>(x);
  if (k >= m_) k = m_ - 1;
  const double frac = x - static_cast<double>(k);
  const auto a = node(k);
  const auto b = node(k + 1);
  for (int i = 0; i < d_; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out[j] = a[j] + frac * (b[j] - a[j]);
  }
}

void Path::increment(double s, double t, std::span<double> out) const {
  double buf[16];
  std::vector<double> heap;
  std::span<double> ws;
  if (d_ <= 16) {
    ws = std::span<double>(buf, static_cast<std::size_t>(d_));
  } else {
    heap.resize(static_cast<std::size_t>(d_));
    ws = heap;
  }
  at(s, ws);
  at(t, out);
  for (int i = 0; i < d_; ++i) out[static_cast<std::size_t>(i)] -= ws[static_cast<std::size_t>(i)];
}

std::vector<double> Path::coordinate_max_abs() const {
  std::vector<double> z(static_cast<std::size_t>(d_), 0.0);
  for (std::size_t k = 0; k <= m_; ++k) {
    const auto v = node(k);
    for (int i = 0; i < d_; ++i) {
      const auto j = static_cast<std::size_t>(i);
      z[j] = std::max(z[j], std::abs(v[j]));
    }
  }
  return z;
}

Path sample_path(std::size_t m, int d, std::uint64_t seed, std::uint64_t stream) {
  if (m == 0) throw DomainError("sample_path: m must be >= 1");
  if (d < 1) throw DomainError("sample_path: d must be >= 1");
  const auto dd = static_cast<std::size_t>(d);
  std::vector<double> values((m + 1) * dd, 0.0);
  Philox rng(seed, stream);
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t i = 0; i < dd; ++i) {
      values[k * dd + i] = values[(k - 1) * dd + i] + scale * rng.normal();
    }
  }
  return Path(m, d, std::move(values), seed);
}

void write_path_csv(std::ostream& os, const Path& path) {
  CsvWriter csv(os);
  csv.comment("seed=" + std::to_string(path.seed()));
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= path.dim(); ++i) cols.push_back("w" + std::to_string(i));
  csv.header(cols);
  for (std::size_t k = 0; k <= path.steps(); ++k) {
    csv.cell(path.time(k));
    for (double v : path.node(k)) csv.cell(v);
    csv.end_row();
  }
}

Path read_path_csv(std::istream& is) {
  std::string line;
  std::uint64_t seed = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("seed=");
      if (pos != std::string::npos) seed = std::stoull(line.substr(pos + 5));
      continue;
    }
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 2 || header[0] != "t") throw DomainError("read_path_csv: missing 't,w1,...' header");
  const int d = static_cast<int>(header.size() - 1);
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw DomainError("read_path_csv: ragged row");
    for (std::size_t i = 1; i < cells.size(); ++i) values.push_back(std::stod(cells[i]));
    ++rows;
  }
  if (rows < 2) throw DomainError("read_path_csv: need at least two rows");
  return Path(rows - 1, d, std::move(values), seed);
}

namespace {

constexpr char kMagic[9] = {'S', 'I', 'L', 'T', 'P', 'A', 'T', 'H', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw DomainError("read_path_binary: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_path_binary(std::ostream& os, const Path& path) {
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(path.dim()));
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(path.steps()));
  put_le<std::uint64_t>(os, path.seed());
  for (std::size_t k = 0; k <= path.steps(); ++k) put_le<double>(os, path.time(k));
  for (double v : path.values()) put_le<double>(os, v);
}

Path read_path_binary(std::istream& is) {
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DomainError("read_path_binary: bad magic");
  }
  const auto d = get_le<std::uint32_t>(is);
  const auto m = get_le<std::uint64_t>(is);
  const auto seed = get_le<std::uint64_t>(is);
  if (d == 0 || m == 0 || d > 4096 || m > (std::uint64_t{1} << 32)) throw DomainError("read_path_binary: bad shape");
  for (std::uint64_t k = 0; k <= m; ++k) (void)get_le<double>(is);
  std::vector<double> values(static_cast<std::size_t>((m + 1) * d));
  for (auto& v : values) v = get_le<double>(is);
  return Path(static_cast<std::size_t>(m), static_cast<int>(d), std::move(values), seed);
}

}  // namespace silt

#include "efs/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "efs/errors.hpp"

namespace efs::io {
namespace {

constexpr std::array<char, 4> kMagic = {'E', 'F', 'S', 'B'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* p, std::size_t len) { buf_.append(p, len); }
  const std::string& bytes() const { return buf_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int b = 0; b < width; ++b) buf_.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string bytes) : buf_(std::move(bytes)) {}

  bool at_end() const { return pos_ == buf_.size(); }
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  double f64() { return std::bit_cast<double>(get(8)); }
  void raw(char* out, std::size_t len) {
    need(len);
    std::memcpy(out, buf_.data() + pos_, len);
    pos_ += len;
  }

 private:
  void need(std::size_t len) const {
    if (buf_.size() - pos_ < len) throw ParseError("efsb file truncated", 0);
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + b])) << (8 * b);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput(std::string(what) + " does not fit the efsb u32 field");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_efsb(const std::string& path, const EfsbFile& file) {
  if (file.snapshots.empty()) throw InvalidInput("efsb needs at least one snapshot");
  const auto n = static_cast<std::size_t>(file.snapshots.front().rows());
  const auto d = static_cast<std::size_t>(file.snapshots.front().cols());
  for (const auto& m : file.snapshots) {
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != d) {
      throw InvalidInput("efsb snapshots must share n and d");
    }
  }
  if (file.labels && file.labels->size() != n) {
    throw InvalidInput("efsb label count differs from n");
  }

  ByteWriter w;
  w.raw(kMagic.data(), kMagic.size());
  w.u16(kEfsbVersion);
  w.u32(checked_u32(n, "n"));
  w.u32(checked_u32(d, "d"));
  w.u32(checked_u32(file.snapshots.size(), "snapshot_count"));
  w.f64(file.gamma);
  w.f64(file.s);
  w.f64(file.epsilon);
  for (const auto& m : file.snapshots) {
    for (Eigen::Index i = 0; i < m.size(); ++i) w.f64(m.data()[i]);
  }
  w.u8(file.labels ? 1 : 0);
  if (file.labels) {
    for (auto label : *file.labels) w.i32(label);
  }
  spill(path, w.bytes());
}

EfsbFile read_efsb(const std::string& path) {
  ByteReader r(slurp(path));
  std::array<char, 4> magic{};
  try {
    r.raw(magic.data(), magic.size());
  } catch (const ParseError&) {
    throw ParseError("'" + path + "' is not an efsb file", 0);
  }
  if (magic != kMagic) throw ParseError("'" + path + "' is not an efsb file (bad magic)", 0);
  const auto version = r.u16();
  if (version != kEfsbVersion) {
    throw ParseError("unsupported efsb version " + std::to_string(version), 0);
  }
  const std::uint32_t n = r.u32();
  const std::uint32_t d = r.u32();
  const std::uint32_t count = r.u32();
  if (n == 0 || d == 0 || count == 0) throw ParseError("efsb header has a zero dimension", 0);

  EfsbFile file;
  file.gamma = r.f64();
  file.s = r.f64();
  file.epsilon = r.f64();
  file.snapshots.reserve(count);
  for (std::uint32_t j = 0; j < count; ++j) {
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = r.f64();
      if (!std::isfinite(m.data()[i])) {
        throw ParseError("non-finite value in efsb snapshot " + std::to_string(j), 0);
      }
    }
    file.snapshots.push_back(std::move(m));
  }
  if (!r.at_end()) {
    const auto flag = r.u8();
    if (flag == 1) {
      std::vector<std::int32_t> labels(n);
      for (auto& label : labels) label = r.i32();
      file.labels = std::move(labels);
    } else if (flag != 0) {
      throw ParseError("bad efsb label flag " + std::to_string(flag), 0);
    }
  }
  if (!r.at_end()) throw ParseError("trailing bytes after efsb payload", 0);
  return file;
}

void save_trajectory(const Trajectory& traj, const std::string& path,
                     const std::optional<std::vector<std::int32_t>>& labels) {
  EfsbFile file;
  file.gamma = traj.gamma();
  file.s = traj.params().s;
  file.epsilon = traj.params().epsilon;
  file.labels = labels;
  file.snapshots.reserve(traj.snapshots().size());
  for (const auto& snap : traj.snapshots()) file.snapshots.push_back(snap.positions());
  write_efsb(path, file);
}

Trajectory load_trajectory(const std::string& path,
                           std::optional<std::vector<std::int32_t>>* labels_out) {
  auto file = read_efsb(path);
  std::vector<ParticleSet> snaps;
  snaps.reserve(file.snapshots.size());
  for (auto& m : file.snapshots) snaps.emplace_back(std::move(m));
  if (labels_out) *labels_out = std::move(file.labels);
  try {
    return Trajectory(std::move(snaps), file.gamma, PotentialParams{file.s, file.epsilon});
  } catch (const InvalidInput& e) {
    throw ParseError("'" + path + "' holds an invalid trajectory: " + e.what(), 0);
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw InvalidInput("cannot format value");
  return std::string(buf.data(), end);
}

long CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return static_cast<long>(c);
  }
  return -1;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw ParseError("malformed number '" + cell + "' in column '" + header.at(col) + "'",
                     lines.at(row));
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value in column '" + header.at(col) + "'", lines.at(row));
  }
  return v;
}

std::int64_t CsvTable::integer(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError("malformed integer '" + cell + "' in column '" + header.at(col) + "'",
                     lines.at(row));
  }
  return v;
}

std::uint64_t CsvTable::unsigned_integer(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError("malformed unsigned integer '" + cell + "' in column '" + header.at(col) +
                         "'",
                     lines.at(row));
  }
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!text.empty() && text.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("expected " + std::to_string(table.header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(line_no);
  }
  if (table.header.empty()) throw ParseError("'" + path + "' has no header row", 0);
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out.push_back(',');
      out += cells[c];
    }
    out.push_back('\n');
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  spill(path, out);
}

}  // namespace efs::io

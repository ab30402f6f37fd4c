#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efs/forward.hpp"
#include "efs/types.hpp"

namespace efs::io {

// efsb layout, all little-endian:
//
//   "EFSB"                 4 bytes magic
//   version                u16 (= 1)
//   n, d, snapshot_count   u32 each
//   gamma, s, epsilon      f64 each
//   snapshot_count blocks of n*d f64, row-major
//   has_labels             u8 (0 or 1)
//   labels                 n x i32, present when has_labels == 1
//
// A single point cloud is snapshot_count = 1. Files that end right after the
// last snapshot block are read as unlabeled.

inline constexpr std::uint16_t kEfsbVersion = 1;

struct EfsbFile {
  std::vector<Matrix> snapshots;
  double gamma = 0.0;
  double s = 0.0;
  double epsilon = 0.0;
  std::optional<std::vector<std::int32_t>> labels;
};

void write_efsb(const std::string& path, const EfsbFile& file);
EfsbFile read_efsb(const std::string& path);

void save_trajectory(const Trajectory& traj, const std::string& path,
                     const std::optional<std::vector<std::int32_t>>& labels = std::nullopt);
/// Loads a trajectory written by save_trajectory; labels (if any) go to
/// `labels_out` when it is non-null.
Trajectory load_trajectory(const std::string& path,
                           std::optional<std::vector<std::int32_t>>* labels_out = nullptr);

/// Decimal rendering with 17 significant digits; round-trips every double.
std::string format_double(double v);

/// A CSV file kept as text cells; conversions report the 1-based file line.
class CsvTable {
 public:
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  /// Index of a header column, or -1.
  long column(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;
  std::uint64_t unsigned_integer(std::size_t row, std::size_t col) const;
};

/// Reads comma-separated text with a header row. Every data row must have as
/// many cells as the header. Empty lines are skipped.
CsvTable read_csv(const std::string& path);

/// Writes header + rows with LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace efs::io

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "efs/log.hpp"
#include "efs/rng.hpp"
#include "efs/types.hpp"

namespace efs::test {

// Collects log lines at or above `min` while alive.
class LogCapture {
 public:
  explicit LogCapture(log::Level min = log::Level::kWarn) : old_level_(log::level()) {
    log::set_level(min);
    old_ = log::set_sink([this](log::Level l, std::string_view m) {
      lines.emplace_back(std::string(log::level_name(l)) + ": " + std::string(m));
    });
  }
  ~LogCapture() {
    log::set_sink(old_);
    log::set_level(old_level_);
  }
  bool contains(const std::string& needle) const {
    for (const auto& l : lines) {
      if (l.find(needle) != std::string::npos) return true;
    }
    return false;
  }
  std::vector<std::string> lines;

 private:
  log::Sink old_;
  log::Level old_level_;
};

inline Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = scale * rng.normal();
  }
  return m;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Matrix rows(std::initializer_list<std::initializer_list<double>> xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto d = static_cast<Eigen::Index>(xs.begin()->size());
  Matrix m(n, d);
  Eigen::Index i = 0;
  for (const auto& r : xs) {
    Eigen::Index c = 0;
    for (double x : r) m(i, c++) = x;
    ++i;
  }
  return m;
}

inline Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "efs_unit";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace efs::test

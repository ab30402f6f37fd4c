#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "efs/backward.hpp"
#include "efs/pipeline.hpp"

namespace efs::cli {

/// All tunables of a run. Defaults are the Gaussian-mixture settings
/// (gamma 0.1, k 31, T 300, beta 0.1, epsilon 1e-3, s 1, n 400).
struct RunConfig {
  double gamma = 0.1;
  std::size_t k = 31;
  std::size_t T = 300;
  double beta = 0.1;
  double epsilon = 1e-3;
  /// Either a number or the token "d-2", resolved against the data dimension.
  std::string s = "1";
  std::size_t n = 400;
  std::uint64_t seed = 0;
  std::string dataset = "mixture";
  double noise = 0.2;
  double grad_tol = 1e-10;
  SnapshotMode snapshot_mode = SnapshotMode::kPaper;
  AugmentMode mode = AugmentMode::kSphere;
  std::size_t m = 50;

  /// Keys assigned through set(), from a file or a flag.
  std::set<std::string> assigned;

  /// Assigns one key from text, validating range. Throws InvalidInput for
  /// unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Reads `key = value` lines; `#` starts a comment. Unknown keys are errors.
  void load_file(const std::string& path);

  /// Resolves s for data of dimension d.
  double resolve_s(std::size_t d) const;
  PotentialParams potential(std::size_t d) const;
  BackwardConfig backward() const;

  /// forward and sample need a real step; roundtrip also accepts gamma = 0.
  void require_positive_gamma() const;

  static const std::vector<std::string>& keys();
};

}  // namespace efs::cli

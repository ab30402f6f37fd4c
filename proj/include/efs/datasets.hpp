#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efs/types.hpp"

namespace efs {

/// A point cloud with optional per-point integer labels (mixture component,
/// roll segment, digit class, ...).
struct LabeledPoints {
  ParticleSet points;
  std::optional<std::vector<std::int32_t>> labels;

  /// Throws InvalidInput when labels are present with the wrong length.
  void validate() const;
};

struct MixtureSpec {
  std::vector<Vector> means;
  std::vector<double> stds;
  std::vector<double> weights;

  /// Four isotropic components at (+-2, +-2), std 0.3, equal weights.
  static MixtureSpec default_2d();
  void validate() const;
};

/// n i.i.d. draws; labels hold the component index of each draw. Components
/// are chosen by inverse-CDF on one uniform, coordinates by Box-Muller.
LabeledPoints gaussian_mixture(std::size_t n, const MixtureSpec& spec, std::uint64_t seed);

/// 2-D Swiss roll: theta ~ U[1.5 pi, 4.5 pi], point = (theta cos theta,
/// theta sin theta) / 3 + noise * N(0, I). Labels bucket theta into quartiles.
LabeledPoints swiss_roll(std::size_t n, double noise, std::uint64_t seed);

/// Generating angle of every swiss_roll point, in draw order. Exposed so that
/// tests can check the construction.
std::vector<double> swiss_roll_angles(std::size_t n, std::uint64_t seed);

enum class PointFormat { kCsv, kEfsb };

/// Picks the format from the file extension (".csv" or ".efsb").
PointFormat format_from_path(const std::string& path);

LabeledPoints load_points(const std::string& path, PointFormat format);
void save_points(const LabeledPoints& lp, const std::string& path, PointFormat format);

}  // namespace efs

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efs/types.hpp"

namespace efs::svg {

enum class Marker { kCircle, kStar };

/// One group of points. Only the first two coordinates are drawn.
struct Layer {
  Matrix points;
  std::optional<std::vector<std::int32_t>> labels;  ///< palette index per point
  Marker marker = Marker::kCircle;
  /// Polyline through the points in order (interpolation paths).
  bool connect = false;
};

/// 800x800 scatter plot. Circles have radius 2 and take their color from an
/// 8-color palette indexed by label (label mod 8; unlabeled points use entry
/// 0); stars are 5-pointed and drawn in black over the circles.
std::string render_scatter(const std::vector<Layer>& layers, const std::string& title = "");
void write_scatter(const std::string& path, const std::vector<Layer>& layers,
                   const std::string& title = "");

}  // namespace efs::svg

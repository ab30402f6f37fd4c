#include "efs/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "efs/errors.hpp"

namespace efs::svg {
namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 40.0;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double cx = 0.0, cy = 0.0, scale = 1.0;

  double x(double v) const { return kSize / 2.0 + (v - cx) * scale; }
  double y(double v) const { return kSize / 2.0 - (v - cy) * scale; }
};

Frame fit(const std::vector<Layer>& layers) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& layer : layers) {
    for (Eigen::Index i = 0; i < layer.points.rows(); ++i) {
      const double x = layer.points(i, 0);
      const double y = layer.points.cols() > 1 ? layer.points(i, 1) : 0.0;
      lo_x = std::min(lo_x, x);
      hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y);
      hi_y = std::max(hi_y, y);
    }
  }
  Frame f;
  if (!std::isfinite(lo_x)) return f;
  f.cx = 0.5 * (lo_x + hi_x);
  f.cy = 0.5 * (lo_y + hi_y);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  f.scale = (kSize - 2.0 * kMargin) / span;
  return f;
}

std::string star_points(double cx, double cy, double outer) {
  const double inner = outer * 0.4;
  std::ostringstream out;
  out.precision(6);
  for (int k = 0; k < 10; ++k) {
    const double r = (k % 2 == 0) ? outer : inner;
    const double a = -std::numbers::pi / 2.0 + k * std::numbers::pi / 5.0;
    if (k) out << ' ';
    out << cx + r * std::cos(a) << ',' << cy + r * std::sin(a);
  }
  return out.str();
}

}  // namespace

std::string render_scatter(const std::vector<Layer>& layers, const std::string& title) {
  const Frame f = fit(layers);
  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << title << "</text>\n";
  }
  auto py = [](const Matrix& m, Eigen::Index i) { return m.cols() > 1 ? m(i, 1) : 0.0; };

  for (const auto& layer : layers) {
    if (layer.labels && layer.labels->size() != static_cast<std::size_t>(layer.points.rows())) {
      throw InvalidInput("svg layer label count differs from point count");
    }
    if (layer.connect && layer.points.rows() > 1) {
      out << "<polyline fill=\"none\" stroke=\"#444\" stroke-width=\"1\" points=\"";
      for (Eigen::Index i = 0; i < layer.points.rows(); ++i) {
        if (i) out << ' ';
        out << f.x(layer.points(i, 0)) << ',' << f.y(py(layer.points, i));
      }
      out << "\"/>\n";
    }
    for (Eigen::Index i = 0; i < layer.points.rows(); ++i) {
      const double x = f.x(layer.points(i, 0));
      const double y = f.y(py(layer.points, i));
      if (layer.marker == Marker::kStar) {
        out << "<polygon points=\"" << star_points(x, y, 8.0)
            << "\" fill=\"black\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
        continue;
      }
      std::size_t color = 0;
      if (layer.labels) {
        const auto label = (*layer.labels)[static_cast<std::size_t>(i)];
        color = static_cast<std::size_t>(((label % 8) + 8) % 8);
      }
      out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"2\" fill=\"" << kPalette[color]
          << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void write_scatter(const std::string& path, const std::vector<Layer>& layers,
                   const std::string& title) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << render_scatter(layers, title);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace efs::svg

#include "efs/datasets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "efs/errors.hpp"
#include "efs/io.hpp"
#include "efs/rng.hpp"

namespace efs {
namespace {

constexpr double kRollStart = 1.5 * std::numbers::pi;
constexpr double kRollSpan = 3.0 * std::numbers::pi;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void LabeledPoints::validate() const {
  if (labels && labels->size() != points.size()) {
    throw InvalidInput("label count " + std::to_string(labels->size()) +
                       " differs from point count " + std::to_string(points.size()));
  }
}

MixtureSpec MixtureSpec::default_2d() {
  MixtureSpec spec;
  for (double x : {2.0, -2.0}) {
    for (double y : {2.0, -2.0}) spec.means.push_back((Vector(2) << x, y).finished());
  }
  spec.stds.assign(4, 0.3);
  spec.weights.assign(4, 0.25);
  return spec;
}

void MixtureSpec::validate() const {
  if (means.empty()) throw InvalidInput("mixture needs at least one component");
  if (stds.size() != means.size() || weights.size() != means.size()) {
    throw InvalidInput("mixture means, stds and weights must have equal length");
  }
  const auto d = means.front().size();
  if (d < 1) throw InvalidInput("mixture means must have dimension >= 1");
  double total = 0.0;
  for (std::size_t c = 0; c < means.size(); ++c) {
    if (means[c].size() != d) throw InvalidInput("mixture means differ in dimension");
    if (!means[c].allFinite()) throw InvalidInput("mixture mean is not finite");
    if (!std::isfinite(stds[c]) || stds[c] < 0.0) throw InvalidInput("mixture std must be >= 0");
    if (!std::isfinite(weights[c]) || weights[c] < 0.0) {
      throw InvalidInput("mixture weights must be nonnegative");
    }
    total += weights[c];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("mixture weights must sum to 1, got " + std::to_string(total));
  }
}

LabeledPoints gaussian_mixture(std::size_t n, const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw InvalidInput("mixture sample count must be >= 1");
  const auto d = spec.means.front().size();
  Rng rng(seed);
  Matrix pts(static_cast<Eigen::Index>(n), d);
  std::vector<std::int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    std::size_t comp = 0;
    double cumulative = spec.weights[0];
    // Skip zero-weight components even when u lands exactly on a boundary.
    while (comp + 1 < spec.weights.size() && (u >= cumulative || spec.weights[comp] == 0.0)) {
      ++comp;
      cumulative += spec.weights[comp];
    }
    labels[i] = static_cast<std::int32_t>(comp);
    for (Eigen::Index c = 0; c < d; ++c) {
      pts(static_cast<Eigen::Index>(i), c) = spec.means[comp][c] + spec.stds[comp] * rng.normal();
    }
  }
  return {ParticleSet(std::move(pts)), std::move(labels)};
}

std::vector<double> swiss_roll_angles(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> theta(n);
  for (auto& t : theta) {
    t = kRollStart + kRollSpan * rng.uniform();
    rng.normal();
    rng.normal();
  }
  return theta;
}

LabeledPoints swiss_roll(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("swiss roll sample count must be >= 1");
  if (!std::isfinite(noise) || noise < 0.0) throw InvalidInput("swiss roll noise must be >= 0");
  Rng rng(seed);
  Matrix pts(static_cast<Eigen::Index>(n), 2);
  std::vector<std::int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double theta = kRollStart + kRollSpan * u;
    const auto row = static_cast<Eigen::Index>(i);
    pts(row, 0) = theta * std::cos(theta) / 3.0 + noise * rng.normal();
    pts(row, 1) = theta * std::sin(theta) / 3.0 + noise * rng.normal();
    labels[i] = static_cast<std::int32_t>(std::min(3.0, std::floor(4.0 * u)));
  }
  return {ParticleSet(std::move(pts)), std::move(labels)};
}

PointFormat format_from_path(const std::string& path) {
  if (ends_with(path, ".csv")) return PointFormat::kCsv;
  if (ends_with(path, ".efsb")) return PointFormat::kEfsb;
  throw InvalidInput("cannot infer format of '" + path + "' (expected .csv or .efsb)");
}

LabeledPoints load_points(const std::string& path, PointFormat format) {
  if (format == PointFormat::kEfsb) {
    auto file = io::read_efsb(path);
    if (file.snapshots.size() != 1) {
      // Trajectory files are accepted; the last snapshot is the point cloud.
      file.snapshots.front() = std::move(file.snapshots.back());
    }
    LabeledPoints lp{ParticleSet(std::move(file.snapshots.front())), std::move(file.labels)};
    lp.validate();
    return lp;
  }

  const auto table = io::read_csv(path);
  std::vector<std::size_t> coord_cols;
  long label_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name == "label") {
      label_col = static_cast<long>(c);
    } else if (name.size() > 1 && name[0] == 'x' &&
               name.find_first_not_of("0123456789", 1) == std::string::npos) {
      coord_cols.push_back(c);
    }
  }
  if (coord_cols.empty()) throw ParseError("'" + path + "' has no x0.. coordinate columns", 1);
  if (table.rows.empty()) throw ParseError("'" + path + "' has no data rows", 0);

  Matrix pts(static_cast<Eigen::Index>(table.rows.size()),
             static_cast<Eigen::Index>(coord_cols.size()));
  std::optional<std::vector<std::int32_t>> labels;
  if (label_col >= 0) labels.emplace(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < coord_cols.size(); ++c) {
      pts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          table.number(r, coord_cols[c]);
    }
    if (labels) {
      (*labels)[r] = static_cast<std::int32_t>(table.integer(r, static_cast<std::size_t>(label_col)));
    }
  }
  return {ParticleSet(std::move(pts)), std::move(labels)};
}

void save_points(const LabeledPoints& lp, const std::string& path, PointFormat format) {
  lp.validate();
  if (format == PointFormat::kEfsb) {
    io::EfsbFile file;
    file.snapshots.push_back(lp.points.positions());
    file.labels = lp.labels;
    io::write_efsb(path, file);
    return;
  }
  std::vector<std::string> header;
  for (std::size_t c = 0; c < lp.points.dim(); ++c) header.push_back("x" + std::to_string(c));
  if (lp.labels) header.emplace_back("label");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(lp.points.size());
  const auto& m = lp.points.positions();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(io::format_double(m(i, c)));
    if (lp.labels) row.push_back(std::to_string((*lp.labels)[static_cast<std::size_t>(i)]));
    rows.push_back(std::move(row));
  }
  io::write_csv(path, header, rows);
}

}  // namespace efs

#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace efs {

/// Row-major so that each particle occupies contiguous memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Exponent and regularizer of the attractive-repulsive pair potential.
struct PotentialParams {
  double s = 1.0;
  double epsilon = 1e-3;

  /// Throws InvalidInput unless s >= 0 and epsilon >= 0, both finite.
  void validate() const;
};

/// A finite point cloud in R^d; row i is particle i.
///
/// The constructor enforces n >= 1, d >= 1 and finite entries. Operations that
/// need interacting pairs (the forward pass, energies) additionally require
/// n >= 2 and check it themselves.
class ParticleSet {
 public:
  ParticleSet() = default;
  explicit ParticleSet(Matrix positions);

  std::size_t size() const noexcept { return static_cast<std::size_t>(positions_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(positions_.cols()); }
  bool empty() const noexcept { return positions_.rows() == 0; }

  const Matrix& positions() const noexcept { return positions_; }
  auto row(std::size_t i) const { return positions_.row(static_cast<Eigen::Index>(i)); }
  const double* data() const noexcept { return positions_.data(); }

  Vector center() const;

  friend bool operator==(const ParticleSet& a, const ParticleSet& b) {
    return a.positions_.rows() == b.positions_.rows() &&
           a.positions_.cols() == b.positions_.cols() && a.positions_ == b.positions_;
  }

 private:
  Matrix positions_;
};

}  // namespace efs

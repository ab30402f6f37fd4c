#include "efs/types.hpp"

#include <cmath>
#include <string>

#include "efs/errors.hpp"

namespace efs {

void PotentialParams::validate() const {
  if (!std::isfinite(s) || s < 0.0) {
    throw InvalidInput("potential exponent s must be finite and >= 0, got " + std::to_string(s));
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw InvalidInput("epsilon must be finite and >= 0, got " + std::to_string(epsilon));
  }
}

ParticleSet::ParticleSet(Matrix positions) : positions_(std::move(positions)) {
  if (positions_.rows() < 1 || positions_.cols() < 1) {
    throw InvalidInput("particle set needs at least one point and one dimension");
  }
  for (Eigen::Index i = 0; i < positions_.rows(); ++i) {
    for (Eigen::Index c = 0; c < positions_.cols(); ++c) {
      if (!std::isfinite(positions_(i, c))) {
        throw InvalidInput("non-finite coordinate at particle " + std::to_string(i));
      }
    }
  }
}

Vector ParticleSet::center() const {
  // Ascending-row accumulation keeps this bit-reproducible.
  Vector c = Vector::Zero(positions_.cols());
  for (Eigen::Index i = 0; i < positions_.rows(); ++i) c += positions_.row(i).transpose();
  return c / static_cast<double>(positions_.rows());
}

}  // namespace efs

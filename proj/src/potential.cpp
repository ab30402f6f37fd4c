#include "efs/potential.hpp"

#include <cmath>
#include <string>

#include "efs/errors.hpp"

namespace efs {
namespace {

double checked_squared_norm(const Vector& z, const PotentialParams& p) {
  p.validate();
  if (z.size() == 0) throw InvalidInput("potential argument has dimension 0");
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) throw InvalidInput("non-finite component in potential argument");
  }
  const double r2 = z.squaredNorm();
  if (r2 + p.epsilon == 0.0) {
    throw SingularityError("pair potential is singular at z = 0 when epsilon = 0");
  }
  return r2;
}

}  // namespace

double potential_value(const Vector& z, const PotentialParams& p) {
  const double r2 = checked_squared_norm(z, p);
  return detail::RadialPotential(p).value(r2);
}

Vector potential_gradient(const Vector& z, const PotentialParams& p) {
  const double r2 = checked_squared_norm(z, p);
  return detail::RadialPotential(p).scale(r2) * z;
}

double pair_hessian_spectral_bound(const PotentialParams& p) {
  p.validate();
  if (p.epsilon <= 0.0) {
    throw SingularityError("curvature bound requires epsilon > 0");
  }
  return 1.0 + (p.s + 3.0) * std::pow(p.epsilon, -(p.s + 2.0) / 2.0);
}

double paper_prox_step_bound(std::size_t n, const PotentialParams& p) {
  p.validate();
  if (n < 2) throw InvalidInput("step bound needs n >= 2, got " + std::to_string(n));
  if (p.epsilon <= 0.0) {
    throw SingularityError("proximal step bound requires epsilon > 0");
  }
  const double m = p.s;
  return static_cast<double>(n - 1) / (1.0 + m * m * std::pow(p.epsilon, -m / 2.0 - 1.0));
}

}  // namespace efs

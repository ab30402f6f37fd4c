#pragma once

#include <cmath>
#include <cstddef>

#include "efs/types.hpp"

namespace efs {

// Attractive-repulsive power-law pair potential
//
//   W(z) = |z|^2 / 2 + 1 / (s (|z|^2 + eps)^(s/2))     s > 0
//   W(z) = |z|^2 / 2 - log(|z|^2 + eps) / 2            s = 0
//
// and its gradient z (1 - (|z|^2 + eps)^(-(s+2)/2)), which is the same
// expression for both branches.

double potential_value(const Vector& z, const PotentialParams& p);
Vector potential_gradient(const Vector& z, const PotentialParams& p);

/// Uniform bound on the spectral norm of the pair Hessian:
/// 1 + (s + 3) eps^(-(s+2)/2). Requires eps > 0.
double pair_hessian_spectral_bound(const PotentialParams& p);

/// Sufficient proximal step bound (n - 1) / (1 + s^2 eps^(-s/2 - 1)) for the
/// joint inversion problem, as derived for the sign-flipped repulsive term.
/// Informational only; the backward pass guards with
/// pair_hessian_spectral_bound instead.
double paper_prox_step_bound(std::size_t n, const PotentialParams& p);

namespace detail {

/// Radial form of W and grad W used by the all-pairs loops. Callers pass the
/// squared distance; `scale(r2)` is the factor multiplying z in grad W.
class RadialPotential {
 public:
  explicit RadialPotential(const PotentialParams& p)
      : s_(p.s), eps_(p.epsilon), half_exp_(-(p.s + 2.0) / 2.0) {
    if (s_ == 0.0) {
      kind_ = Kind::kLog;
    } else if (s_ == 1.0) {
      kind_ = Kind::kOne;
    } else if (s_ == 2.0) {
      kind_ = Kind::kTwo;
    } else {
      kind_ = Kind::kGeneral;
    }
  }

  /// (r2 + eps)^(-(s+2)/2)
  double repulsion(double r2) const {
    const double q = r2 + eps_;
    switch (kind_) {
      case Kind::kLog:
        return 1.0 / q;
      case Kind::kOne:
        return 1.0 / (q * std::sqrt(q));
      case Kind::kTwo:
        return 1.0 / (q * q);
      case Kind::kGeneral:
        break;
    }
    return std::pow(q, half_exp_);
  }

  double scale(double r2) const { return 1.0 - repulsion(r2); }

  double value(double r2) const {
    const double q = r2 + eps_;
    if (kind_ == Kind::kLog) return 0.5 * r2 - 0.5 * std::log(q);
    return 0.5 * r2 + 1.0 / (s_ * std::pow(q, 0.5 * s_));
  }

  bool singular(double r2) const { return r2 + eps_ == 0.0; }

 private:
  enum class Kind { kLog, kOne, kTwo, kGeneral };
  double s_;
  double eps_;
  double half_exp_;
  Kind kind_;
};

}  // namespace detail
}  // namespace efs

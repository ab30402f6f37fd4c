#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "efs/forward.hpp"
#include "efs/pipeline.hpp"
#include "efs/types.hpp"

namespace efs {

enum class MmdEstimator {
  /// Regularized kernel 1/(s (|D|^2 + eps)^(s/2)), diagonal terms included.
  /// Nonnegative for s > 0, eps > 0.
  kRegularizedV,
  /// Kernel 1/(s |D|^s) without diagonal terms. No sign guarantee; for study.
  kUnregularizedU,
};

/// Squared maximum mean discrepancy with the Riesz kernel.
double mmd_squared(const ParticleSet& a, const ParticleSet& b, const PotentialParams& p,
                   MmdEstimator estimator = MmdEstimator::kRegularizedV);

struct UniformityReport {
  /// KS distance of |x - c| / R_max against the uniform-ball radial law u^d.
  double radial_ks = 0.0;
  /// d = 2 only: KS distance of the polar angle against the uniform law,
  /// minimized over angle origins placed at the sample angles (so the value
  /// does not depend on the coordinate frame).
  std::optional<double> angular_ks;
  Enclosure enclosure;
};

/// Requires n >= 10.
UniformityReport uniformity_report(const ParticleSet& ps);

/// One-sample KS distance of `samples` against `cdf`; the standard
/// sup |F_n - F| over the sorted sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Kuiper's V = D+ + D- of values in [0, 1) against U[0, 1). Unlike the plain
/// KS distance it does not depend on where the circle is cut.
double circular_ks_statistic(std::vector<double> unit_values);

struct NoveltyStats {
  double min_nn = 0.0;        ///< min over generated of the distance to the nearest training point
  double mean_nn = 0.0;       ///< mean of the same distances
  double self_nn_mean = 0.0;  ///< mean nearest-neighbor distance within training; NaN for one point
};

/// Requires both sets non-empty and of equal dimension; training needs >= 2
/// points for the self-NN term.
NoveltyStats nn_novelty(const ParticleSet& generated, const ParticleSet& training);

/// interaction_energy of every snapshot, in order.
std::vector<double> energy_trace(const Trajectory& traj);

}  // namespace efs

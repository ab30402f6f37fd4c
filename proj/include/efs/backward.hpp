#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "efs/forward.hpp"
#include "efs/types.hpp"

namespace efs {

/// Which stored snapshot each proximal inversion is solved against.
///
///  - kPaper: j = k, k-1, ..., 0, inverting against x^(j) (k + 1 inversions).
///  - kExact: j = k, ..., 1, inverting against x^(j-1) (k inversions). This is
///    the schedule under which inverting a stored forward step is exact.
enum class SnapshotMode { kPaper, kExact };

std::string_view to_string(SnapshotMode mode);
SnapshotMode parse_snapshot_mode(std::string_view text);

struct BackwardConfig {
  double gamma = 0.1;  ///< must match the forward step size
  double beta = 0.1;   ///< inner gradient step
  std::size_t T = 300; ///< inner iteration cap
  double grad_tol = 1e-10;
  SnapshotMode snapshot_mode = SnapshotMode::kPaper;

  void validate() const;
};

/// Points y^(k), ..., y^(0) visited by one backward pass, plus the final inner
/// gradient norm of every inversion. In exact mode points has k + 1 entries;
/// in paper mode it has k + 2 (the extra inversion against x^(0)).
struct BackwardPath {
  std::vector<Vector> points;
  std::vector<double> inner_residuals;

  const Vector& generated() const { return points.back(); }
};

struct InversionResult {
  Vector point;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Outcome of the step-size checks done before a backward pass.
struct ConvexityGuard {
  double gamma_times_bound = 0.0;   ///< gamma * pair_hessian_spectral_bound
  double inner_stability = 0.0;     ///< beta * (1 + gamma * L_W), stable when < 2
  double paper_bound = 0.0;         ///< joint-problem bound, informational
  bool convex = false;              ///< gamma_times_bound < 1
  bool stable = false;
};

/// Evaluates the guards for `n` snapshot particles and logs a warning for
/// each violated one. Requires epsilon > 0; with epsilon = 0 no bound exists
/// and the guard reports non-convex.
ConvexityGuard check_convexity_guard(const BackwardConfig& cfg, const PotentialParams& p,
                                     std::size_t n);

/// H(v) = |v - anchor|^2 / 2 - (gamma / n) sum_i W(v - x_i).
double prox_objective(const Vector& v, const Vector& anchor, const ParticleSet& snap,
                      const BackwardConfig& cfg, const PotentialParams& p);

/// grad H(v) = v - anchor - (gamma / n) sum_i grad W(v - x_i).
Vector prox_gradient(const Vector& v, const Vector& anchor, const ParticleSet& snap,
                     const BackwardConfig& cfg, const PotentialParams& p);

/// Gradient descent on H started at v = y_j: at most cfg.T steps of size
/// cfg.beta, stopping early once |grad H| <= cfg.grad_tol.
InversionResult invert_step(const Vector& y_j, const ParticleSet& snap, const BackwardConfig& cfg,
                            const PotentialParams& p);

/// Walks y_k back through the stored snapshots according to
/// cfg.snapshot_mode. The potential parameters come from the trajectory.
/// With `check_guard` the step-size guards are evaluated (and logged) first;
/// batch callers check once and pass false.
BackwardPath run_backward(const Vector& y_k, const Trajectory& traj, const BackwardConfig& cfg,
                          bool check_guard = true);

}  // namespace efs

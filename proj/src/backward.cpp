#include "efs/backward.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "efs/errors.hpp"
#include "efs/log.hpp"
#include "efs/potential.hpp"

namespace efs {
namespace {

void require_compatible(const Vector& v, const ParticleSet& snap) {
  if (snap.empty()) throw InvalidInput("snapshot is empty");
  if (static_cast<std::size_t>(v.size()) != snap.dim()) {
    throw InvalidInput("point dimension " + std::to_string(v.size()) +
                       " does not match snapshot dimension " + std::to_string(snap.dim()));
  }
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    if (!std::isfinite(v[c])) throw InvalidInput("non-finite coordinate in backward point");
  }
}

// (gamma / n) sum_i grad W(v - x_i), summed in ascending i.
void interaction_pull(const double* v, const ParticleSet& snap, double gamma,
                      const detail::RadialPotential& w, double* out) {
  const std::size_t n = snap.size();
  const std::size_t d = snap.dim();
  const double* x = snap.data();
  for (std::size_t c = 0; c < d; ++c) out[c] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x + i * d;
    double r2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = v[c] - xi[c];
      r2 += diff * diff;
    }
    if (w.singular(r2)) {
      throw SingularityError("backward point coincides with snapshot particle " +
                             std::to_string(i) + " with epsilon = 0");
    }
    const double f = w.scale(r2);
    for (std::size_t c = 0; c < d; ++c) out[c] += f * (v[c] - xi[c]);
  }
  const double scale = gamma / static_cast<double>(n);
  for (std::size_t c = 0; c < d; ++c) out[c] *= scale;
}

}  // namespace

std::string_view to_string(SnapshotMode mode) {
  return mode == SnapshotMode::kExact ? "exact" : "paper";
}

SnapshotMode parse_snapshot_mode(std::string_view text) {
  if (text == "paper") return SnapshotMode::kPaper;
  if (text == "exact") return SnapshotMode::kExact;
  throw InvalidInput("snapshot_mode must be 'paper' or 'exact', got '" + std::string(text) + "'");
}

void BackwardConfig::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidInput("backward gamma must be >= 0");
  if (!std::isfinite(beta) || beta <= 0.0) throw InvalidInput("beta must be positive");
  if (T < 1) throw InvalidInput("inner iteration count T must be >= 1");
  if (!std::isfinite(grad_tol) || grad_tol < 0.0) throw InvalidInput("grad_tol must be >= 0");
}

ConvexityGuard check_convexity_guard(const BackwardConfig& cfg, const PotentialParams& p,
                                     std::size_t n) {
  cfg.validate();
  p.validate();
  ConvexityGuard guard;
  if (p.epsilon <= 0.0) {
    log::warn("epsilon = 0: the proximal objective has no curvature bound");
    return guard;
  }
  const double bound = pair_hessian_spectral_bound(p);
  guard.gamma_times_bound = cfg.gamma * bound;
  guard.inner_stability = cfg.beta * (1.0 + cfg.gamma * bound);
  guard.convex = guard.gamma_times_bound < 1.0;
  guard.stable = guard.inner_stability < 2.0;
  if (n >= 2) guard.paper_bound = paper_prox_step_bound(n, p);

  if (!guard.convex) {
    std::ostringstream msg;
    msg << "gamma * L_W = " << guard.gamma_times_bound
        << " >= 1: proximal objective is not certified convex (gamma < " << 1.0 / bound
        << " required)";
    log::warn(msg.str());
  }
  if (!guard.stable) {
    std::ostringstream msg;
    msg << "beta * (1 + gamma * L_W) = " << guard.inner_stability
        << " >= 2: inner descent is not certified stable";
    log::warn(msg.str());
  }
  if (n >= 2 && cfg.gamma >= guard.paper_bound) {
    std::ostringstream msg;
    msg << "gamma = " << cfg.gamma << " exceeds the joint proximal bound " << guard.paper_bound;
    log::info(msg.str());
  }
  return guard;
}

double prox_objective(const Vector& v, const Vector& anchor, const ParticleSet& snap,
                      const BackwardConfig& cfg, const PotentialParams& p) {
  p.validate();
  require_compatible(v, snap);
  require_compatible(anchor, snap);
  const detail::RadialPotential w(p);
  const std::size_t n = snap.size();
  const std::size_t d = snap.dim();
  const double* x = snap.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x + i * d;
    double r2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = v[static_cast<Eigen::Index>(c)] - xi[c];
      r2 += diff * diff;
    }
    if (w.singular(r2)) {
      throw SingularityError("proximal objective is singular at snapshot particle " +
                             std::to_string(i));
    }
    sum += w.value(r2);
  }
  return 0.5 * (v - anchor).squaredNorm() - cfg.gamma / static_cast<double>(n) * sum;
}

Vector prox_gradient(const Vector& v, const Vector& anchor, const ParticleSet& snap,
                     const BackwardConfig& cfg, const PotentialParams& p) {
  p.validate();
  require_compatible(v, snap);
  require_compatible(anchor, snap);
  Vector pull(v.size());
  interaction_pull(v.data(), snap, cfg.gamma, detail::RadialPotential(p), pull.data());
  return v - anchor - pull;
}

InversionResult invert_step(const Vector& y_j, const ParticleSet& snap, const BackwardConfig& cfg,
                            const PotentialParams& p) {
  cfg.validate();
  p.validate();
  require_compatible(y_j, snap);

  const detail::RadialPotential w(p);
  const auto d = y_j.size();
  InversionResult result;
  result.point = y_j;
  Vector& v = result.point;
  Vector pull(d);
  Vector delta(d);

  for (std::size_t t = 0; t < cfg.T; ++t) {
    interaction_pull(v.data(), snap, cfg.gamma, w, pull.data());
    delta = v - y_j - pull;
    result.residual = delta.norm();
    result.iterations = t + 1;
    if (result.residual <= cfg.grad_tol) return result;
    v -= cfg.beta * delta;
    if (!v.allFinite()) {
      std::ostringstream msg;
      msg << "inner descent diverged after " << t + 1 << " iterations with beta = " << cfg.beta;
      throw InstabilityError(msg.str());
    }
  }
  interaction_pull(v.data(), snap, cfg.gamma, w, pull.data());
  result.residual = (v - y_j - pull).norm();
  return result;
}

BackwardPath run_backward(const Vector& y_k, const Trajectory& traj, const BackwardConfig& cfg,
                          bool check_guard) {
  cfg.validate();
  if (traj.snapshots().empty()) throw InvalidInput("empty trajectory");
  require_compatible(y_k, traj.final());
  if (cfg.gamma != traj.gamma()) {
    std::ostringstream msg;
    msg << "backward gamma " << cfg.gamma << " differs from trajectory gamma " << traj.gamma();
    log::warn(msg.str());
  }
  if (check_guard) check_convexity_guard(cfg, traj.params(), traj.size());

  const std::size_t k = traj.steps();
  const bool exact = cfg.snapshot_mode == SnapshotMode::kExact;
  BackwardPath path;
  path.points.reserve(k + 2);
  path.inner_residuals.reserve(k + 1);
  path.points.push_back(y_k);

  // Inversion number m (0-based) undoes step j = k - m.
  const std::size_t inversions = exact ? k : k + 1;
  for (std::size_t m = 0; m < inversions; ++m) {
    const std::size_t j = k - m;
    const std::size_t snap_index = exact ? j - 1 : j;
    try {
      auto r = invert_step(path.points.back(), traj.snapshot(snap_index), cfg, traj.params());
      path.points.push_back(std::move(r.point));
      path.inner_residuals.push_back(r.residual);
    } catch (const Error& e) {
      const std::string where = "backward step j = " + std::to_string(j) + ": ";
      if (dynamic_cast<const SingularityError*>(&e)) throw SingularityError(where + e.what());
      if (dynamic_cast<const InstabilityError*>(&e)) throw InstabilityError(where + e.what());
      throw;
    }
  }
  return path;
}

}  // namespace efs

#pragma once

#include <cstddef>
#include <vector>

#include "efs/types.hpp"

namespace efs {

/// Forward snapshots x^(0), ..., x^(k) of the particle gradient descent,
/// together with the configuration that produced them.
class Trajectory {
 public:
  Trajectory() = default;
  /// Validates that there is at least one snapshot and that all snapshots
  /// share n and d.
  Trajectory(std::vector<ParticleSet> snapshots, double gamma, PotentialParams params);

  const std::vector<ParticleSet>& snapshots() const noexcept { return snapshots_; }
  const ParticleSet& snapshot(std::size_t j) const { return snapshots_.at(j); }
  const ParticleSet& initial() const { return snapshots_.front(); }
  const ParticleSet& final() const { return snapshots_.back(); }

  /// Number of forward steps, i.e. snapshots().size() - 1.
  std::size_t steps() const noexcept { return snapshots_.empty() ? 0 : snapshots_.size() - 1; }
  std::size_t size() const noexcept { return snapshots_.empty() ? 0 : snapshots_.front().size(); }
  std::size_t dim() const noexcept { return snapshots_.empty() ? 0 : snapshots_.front().dim(); }
  double gamma() const noexcept { return gamma_; }
  const PotentialParams& params() const noexcept { return params_; }

 private:
  std::vector<ParticleSet> snapshots_;
  double gamma_ = 0.0;
  PotentialParams params_;
};

struct ForwardOptions {
  /// Evaluate the energy after every step and warn when it increases.
  bool monitor_descent = false;
};

/// E_n = 1/(n(n-1)) sum_i sum_{j != i} W(x_i - x_j).
double interaction_energy(const ParticleSet& ps, const PotentialParams& p);

/// Row i is (1/(n-1)) sum_{a != i} grad W(x_i - x_a), accumulated in
/// ascending a.
Matrix forward_gradient(const ParticleSet& ps, const PotentialParams& p);

/// Simultaneous update x_i <- x_i - gamma * forward_gradient(x)_i. gamma == 0
/// is the identity; negative gamma is rejected.
ParticleSet forward_step(const ParticleSet& ps, double gamma, const PotentialParams& p);

/// k steps of forward_step; snapshot 0 is a copy of ps0.
Trajectory run_forward(const ParticleSet& ps0, double gamma, std::size_t k,
                       const PotentialParams& p, const ForwardOptions& options = {});

}  // namespace efs

#include "efs/forward.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "efs/errors.hpp"
#include "efs/log.hpp"
#include "efs/potential.hpp"
#include "parallel.hpp"

namespace efs {
namespace {

void require_pairs(const ParticleSet& ps) {
  if (ps.size() < 2) {
    throw InvalidInput("need at least 2 particles, got " + std::to_string(ps.size()));
  }
}

[[noreturn]] void throw_coincident(std::size_t i, std::size_t a) {
  throw SingularityError("particles " + std::to_string(i) + " and " + std::to_string(a) +
                         " coincide with epsilon = 0");
}

}  // namespace

Trajectory::Trajectory(std::vector<ParticleSet> snapshots, double gamma, PotentialParams params)
    : snapshots_(std::move(snapshots)), gamma_(gamma), params_(params) {
  if (snapshots_.empty()) throw InvalidInput("trajectory needs at least one snapshot");
  if (!std::isfinite(gamma_) || gamma_ < 0.0) throw InvalidInput("trajectory gamma must be >= 0");
  params_.validate();
  const auto n = snapshots_.front().size();
  const auto d = snapshots_.front().dim();
  for (std::size_t j = 1; j < snapshots_.size(); ++j) {
    if (snapshots_[j].size() != n || snapshots_[j].dim() != d) {
      throw InvalidInput("snapshot " + std::to_string(j) + " shape differs from snapshot 0");
    }
  }
}

double interaction_energy(const ParticleSet& ps, const PotentialParams& p) {
  p.validate();
  require_pairs(ps);
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  const double* x = ps.data();
  const detail::RadialPotential w(p);

  std::vector<double> row_sums(n, 0.0);
  detail::parallel_for(n, [&](std::size_t i) {
    const double* xi = x + i * d;
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      const double* xa = x + a * d;
      double r2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = xi[c] - xa[c];
        r2 += diff * diff;
      }
      if (w.singular(r2)) throw_coincident(i, a);
      acc += w.value(r2);
    }
    row_sums[i] = acc;
  });

  double total = 0.0;
  for (double v : row_sums) total += v;
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

Matrix forward_gradient(const ParticleSet& ps, const PotentialParams& p) {
  p.validate();
  require_pairs(ps);
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();
  const double* x = ps.data();
  const detail::RadialPotential w(p);
  const double inv = 1.0 / static_cast<double>(n - 1);

  Matrix grad(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  double* g = grad.data();
  detail::parallel_for(n, [&](std::size_t i) {
    const double* xi = x + i * d;
    double* gi = g + i * d;
    for (std::size_t c = 0; c < d; ++c) gi[c] = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      const double* xa = x + a * d;
      double r2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = xi[c] - xa[c];
        r2 += diff * diff;
      }
      if (w.singular(r2)) throw_coincident(i, a);
      const double f = w.scale(r2);
      for (std::size_t c = 0; c < d; ++c) gi[c] += f * (xi[c] - xa[c]);
    }
    for (std::size_t c = 0; c < d; ++c) gi[c] *= inv;
  });
  return grad;
}

ParticleSet forward_step(const ParticleSet& ps, double gamma, const PotentialParams& p) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw InvalidInput("gamma must be finite and >= 0");
  }
  Matrix next = ps.positions() - gamma * forward_gradient(ps, p);
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    if (!std::isfinite(next.data()[i])) {
      throw InstabilityError("forward step produced non-finite positions; reduce gamma");
    }
  }
  return ParticleSet(std::move(next));
}

Trajectory run_forward(const ParticleSet& ps0, double gamma, std::size_t k,
                       const PotentialParams& p, const ForwardOptions& options) {
  if (k < 1) throw InvalidInput("forward iteration count k must be >= 1");
  p.validate();
  require_pairs(ps0);

  if (gamma > 0.0 && p.epsilon > 0.0) {
    const double bound = pair_hessian_spectral_bound(p);
    if (gamma * bound > 1.0) {
      std::ostringstream msg;
      msg << "gamma * L_pair = " << gamma * bound
          << " > 1; monotone energy descent is not guaranteed";
      log::debug(msg.str());
    }
  }

  std::vector<ParticleSet> snaps;
  snaps.reserve(k + 1);
  snaps.push_back(ps0);
  double energy = options.monitor_descent ? interaction_energy(ps0, p) : 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    try {
      snaps.push_back(forward_step(snaps.back(), gamma, p));
    } catch (const SingularityError& e) {
      throw SingularityError("forward iteration " + std::to_string(j + 1) + ": " + e.what());
    } catch (const InstabilityError& e) {
      throw InstabilityError("forward iteration " + std::to_string(j + 1) + ": " + e.what());
    }
    if (options.monitor_descent) {
      const double next = interaction_energy(snaps.back(), p);
      if (next > energy) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "energy increased at forward iteration " << j + 1 << ": " << energy << " -> "
            << next;
        log::warn(msg.str());
      }
      energy = next;
    }
  }
  return Trajectory(std::move(snaps), gamma, p);
}

}  // namespace efs

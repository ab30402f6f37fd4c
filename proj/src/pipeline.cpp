#include "efs/pipeline.hpp"

#include <cmath>
#include <string>

#include "efs/errors.hpp"
#include "efs/log.hpp"
#include "parallel.hpp"

namespace efs {
namespace {

Vector sphere_direction(std::size_t d, Rng& rng) {
  if (d < 2) throw InvalidInput("sphere sampling needs d >= 2, got d = " + std::to_string(d));
  Vector dir(static_cast<Eigen::Index>(d));
  double norm2 = 0.0;
  // A zero vector has probability ~0 but is redrawn for safety of the divide.
  do {
    for (Eigen::Index c = 0; c < dir.size(); ++c) dir[c] = rng.normal();
    norm2 = dir.squaredNorm();
  } while (norm2 == 0.0);
  return dir / std::sqrt(norm2);
}

void check_enclosure(const Enclosure& enc, std::size_t d) {
  if (static_cast<std::size_t>(enc.center.size()) != d) {
    throw InvalidInput("enclosure center dimension differs from d");
  }
  if (!std::isfinite(enc.radius) || enc.radius <= 0.0) {
    throw InvalidInput("enclosure radius must be finite and positive");
  }
}

Augmentation augment(const Trajectory& traj, const Enclosure& enc, AugmentMode mode,
                     bool uniform_ball, const GenerateOptions& options, std::uint64_t seed) {
  Augmentation a;
  a.seed = seed;
  Rng rng(seed);
  const auto& final = traj.final();
  if (mode == AugmentMode::kSphere) {
    a.start = uniform_ball ? sample_ball(enc, final.dim(), rng)
                           : sample_sphere(enc, final.dim(), rng);
    return a;
  }
  const std::size_t n = final.size();
  std::size_t i = options.i ? *options.i : static_cast<std::size_t>(rng.below(n));
  std::size_t j = 0;
  if (options.j) {
    j = *options.j;
  } else {
    j = static_cast<std::size_t>(rng.below(n - 1));
    if (j >= i) ++j;
  }
  const double t = options.t ? *options.t : rng.uniform();
  a.i = i;
  a.j = j;
  a.t = t;
  a.start = interpolate_latent(final, i, j, t);
  return a;
}

SampleBatch backward_batch(const Trajectory& traj, const BackwardConfig& bwd, AugmentMode mode,
                           bool uniform_ball, std::vector<Augmentation> provenance,
                           bool keep_paths) {
  check_convexity_guard(bwd, traj.params(), traj.size());
  const std::size_t m = provenance.size();
  std::vector<BackwardPath> paths(m);
  detail::parallel_for(m, [&](std::size_t q) {
    try {
      paths[q] = run_backward(provenance[q].start, traj, bwd, false);
    } catch (const SingularityError& e) {
      throw SingularityError("backward stage, sample " + std::to_string(q) + ": " + e.what());
    } catch (const InstabilityError& e) {
      throw InstabilityError("backward stage, sample " + std::to_string(q) + ": " + e.what());
    }
  });

  SampleBatch batch;
  batch.mode = mode;
  batch.uniform_ball = uniform_ball;
  batch.generated.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(traj.dim()));
  for (std::size_t q = 0; q < m; ++q) {
    batch.generated.row(static_cast<Eigen::Index>(q)) = paths[q].generated().transpose();
  }
  batch.provenance = std::move(provenance);
  if (keep_paths) batch.paths = std::move(paths);
  return batch;
}

}  // namespace

Enclosure estimate_enclosure(const ParticleSet& ps) {
  if (ps.size() < 2) throw InvalidInput("enclosure needs at least 2 points");
  Enclosure enc;
  enc.center = ps.center();
  double total = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    total += (ps.row(i).transpose() - enc.center).norm();
  }
  enc.radius = total / static_cast<double>(ps.size());
  if (!(enc.radius > 0.0)) throw DegenerateError("all points coincide; enclosure is degenerate");
  return enc;
}

Vector sample_sphere(const Enclosure& enc, std::size_t d, Rng& rng) {
  check_enclosure(enc, d);
  return enc.center + enc.radius * sphere_direction(d, rng);
}

Vector sample_ball(const Enclosure& enc, std::size_t d, Rng& rng) {
  check_enclosure(enc, d);
  const Vector dir = sphere_direction(d, rng);
  const double scale = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return enc.center + enc.radius * scale * dir;
}

Vector interpolate_latent(const ParticleSet& ps, std::size_t i, std::size_t j, double t) {
  if (i >= ps.size() || j >= ps.size()) {
    throw InvalidInput("interpolation index out of range (n = " + std::to_string(ps.size()) + ")");
  }
  if (i == j) throw InvalidInput("interpolation needs two distinct indices");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("interpolation weight t must lie in [0, 1]");
  return (1.0 - t) * ps.row(i).transpose() + t * ps.row(j).transpose();
}

std::string_view to_string(AugmentMode mode) {
  return mode == AugmentMode::kSphere ? "sphere" : "interp";
}

AugmentMode parse_augment_mode(std::string_view text) {
  if (text == "sphere") return AugmentMode::kSphere;
  if (text == "interp" || text == "interpolation") return AugmentMode::kInterpolation;
  throw InvalidInput("augmentation mode must be 'sphere' or 'interp', got '" + std::string(text) +
                     "'");
}

std::vector<std::uint64_t> SampleBatch::seeds() const {
  std::vector<std::uint64_t> out;
  out.reserve(provenance.size());
  for (const auto& a : provenance) out.push_back(a.seed);
  return out;
}

SampleBatch generate_from_trajectory(const Trajectory& traj, const BackwardConfig& bwd,
                                     const GenerateOptions& options) {
  if (options.m < 1) throw InvalidInput("sample count m must be >= 1");
  if (traj.size() < 2) throw InvalidInput("trajectory needs at least 2 particles");
  Enclosure enc;
  if (options.mode == AugmentMode::kSphere) {
    enc = estimate_enclosure(traj.final());
  } else if ((options.i && options.j && *options.i == *options.j)) {
    throw InvalidInput("interpolation needs two distinct indices");
  }
  std::vector<Augmentation> provenance;
  provenance.reserve(options.m);
  for (std::size_t q = 0; q < options.m; ++q) {
    try {
      provenance.push_back(augment(traj, enc, options.mode, options.uniform_ball, options,
                                   Rng::derive(options.seed, q)));
    } catch (const InvalidInput& e) {
      throw InvalidInput("augmentation stage, sample " + std::to_string(q) + ": " + e.what());
    }
  }
  return backward_batch(traj, bwd, options.mode, options.uniform_ball, std::move(provenance),
                        options.keep_paths);
}

GenerateResult efs_generate(const ParticleSet& ps0, const ForwardConfig& fwd,
                            const BackwardConfig& bwd, const GenerateOptions& options) {
  if (bwd.gamma != fwd.gamma) {
    log::warn("backward gamma differs from forward gamma; inversion will not match the forward map");
  }
  Trajectory traj = [&] {
    try {
      return run_forward(ps0, fwd.gamma, fwd.k, fwd.params);
    } catch (const SingularityError& e) {
      throw SingularityError(std::string("forward stage: ") + e.what());
    } catch (const InstabilityError& e) {
      throw InstabilityError(std::string("forward stage: ") + e.what());
    }
  }();
  SampleBatch batch = generate_from_trajectory(traj, bwd, options);
  return {std::move(traj), std::move(batch)};
}

SampleBatch replay_samples(const Trajectory& traj, const BackwardConfig& bwd, AugmentMode mode,
                           const std::vector<Augmentation>& provenance, bool uniform_ball,
                           bool keep_paths) {
  if (provenance.empty()) throw InvalidInput("nothing to replay");
  Enclosure enc;
  if (mode == AugmentMode::kSphere) enc = estimate_enclosure(traj.final());
  std::vector<Augmentation> rebuilt;
  rebuilt.reserve(provenance.size());
  for (const auto& rec : provenance) {
    GenerateOptions fixed;
    fixed.i = rec.i;
    fixed.j = rec.j;
    fixed.t = rec.t;
    if (mode == AugmentMode::kInterpolation && !(rec.i && rec.j && rec.t)) {
      throw InvalidInput("interpolation replay needs i, j and t for every sample");
    }
    rebuilt.push_back(augment(traj, enc, mode, uniform_ball, fixed, rec.seed));
  }
  return backward_batch(traj, bwd, mode, uniform_ball, std::move(rebuilt), keep_paths);
}

SampleBatch interpolation_path(const Trajectory& traj, std::size_t i, std::size_t j,
                               std::size_t steps, const BackwardConfig& bwd, bool keep_paths) {
  if (steps < 2) throw InvalidInput("interpolation path needs steps >= 2");
  std::vector<Augmentation> provenance;
  provenance.reserve(steps);
  for (std::size_t q = 0; q < steps; ++q) {
    Augmentation a;
    a.seed = q;
    a.i = i;
    a.j = j;
    // Endpoints are exact so that t = 0 and t = 1 reproduce x_i and x_j.
    a.t = q + 1 == steps ? 1.0 : static_cast<double>(q) / static_cast<double>(steps - 1);
    a.start = interpolate_latent(traj.final(), i, j, *a.t);
    provenance.push_back(std::move(a));
  }
  return backward_batch(traj, bwd, AugmentMode::kInterpolation, false, std::move(provenance),
                        keep_paths);
}

}  // namespace efs

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "efs/backward.hpp"
#include "efs/forward.hpp"
#include "efs/rng.hpp"
#include "efs/types.hpp"

namespace efs {

/// Sphere (or ball) enclosing the forward-transported particles.
struct Enclosure {
  Vector center;
  double radius = 0.0;
};

/// center = mean of the points, radius = mean distance to the center.
/// Throws DegenerateError when every point coincides.
Enclosure estimate_enclosure(const ParticleSet& ps);

/// Uniform point on the sphere |v - c| = r: d Box-Muller normals, normalized.
/// Requires d >= 2.
Vector sample_sphere(const Enclosure& enc, std::size_t d, Rng& rng);

/// Uniform point in the ball |v - c| <= r: a sphere direction scaled by
/// r u^(1/d).
Vector sample_ball(const Enclosure& enc, std::size_t d, Rng& rng);

/// (1 - t) x_i + t x_j with i != j and t in [0, 1].
Vector interpolate_latent(const ParticleSet& ps, std::size_t i, std::size_t j, double t);

enum class AugmentMode { kSphere, kInterpolation };

std::string_view to_string(AugmentMode mode);
AugmentMode parse_augment_mode(std::string_view text);

struct ForwardConfig {
  double gamma = 0.1;
  std::size_t k = 31;
  PotentialParams params;
};

struct GenerateOptions {
  std::size_t m = 1;
  AugmentMode mode = AugmentMode::kSphere;
  std::uint64_t seed = 0;
  /// Sphere mode: draw from the full ball instead of its boundary.
  bool uniform_ball = false;
  /// Interpolation mode: fixed pair and weight; unset values are drawn from
  /// the per-sample generator (distinct uniform indices, t ~ U[0, 1)).
  std::optional<std::size_t> i;
  std::optional<std::size_t> j;
  std::optional<double> t;
  bool keep_paths = false;
};

/// How one augmented point was produced.
struct Augmentation {
  std::uint64_t seed = 0;
  Vector start;                  ///< y^(k)
  std::optional<std::size_t> i;  ///< interpolation pair
  std::optional<std::size_t> j;
  std::optional<double> t;
};

struct SampleBatch {
  Matrix generated;  ///< row q is y^(0) of sample q
  AugmentMode mode = AugmentMode::kSphere;
  bool uniform_ball = false;
  std::vector<Augmentation> provenance;
  std::optional<std::vector<BackwardPath>> paths;

  std::size_t size() const noexcept { return provenance.size(); }
  std::vector<std::uint64_t> seeds() const;
};

struct GenerateResult {
  Trajectory trajectory;
  SampleBatch batch;
};

/// Full pipeline: forward transport of ps0, m augmentations, one backward
/// pass per augmentation. Sample q uses seed Rng::derive(options.seed, q).
GenerateResult efs_generate(const ParticleSet& ps0, const ForwardConfig& fwd,
                            const BackwardConfig& bwd, const GenerateOptions& options);

/// Augmentation and backward stages against an existing trajectory.
SampleBatch generate_from_trajectory(const Trajectory& traj, const BackwardConfig& bwd,
                                     const GenerateOptions& options);

/// Re-runs the samples described by `provenance` (seeds and, for
/// interpolation, the recorded pair and weight). Bit-identical to the batch
/// that produced the records.
SampleBatch replay_samples(const Trajectory& traj, const BackwardConfig& bwd, AugmentMode mode,
                           const std::vector<Augmentation>& provenance, bool uniform_ball = false,
                           bool keep_paths = false);

/// Backward-maps `steps` equispaced points t = q / (steps - 1) on the segment
/// between x_i^(k) and x_j^(k). The seeds field holds the path position q.
SampleBatch interpolation_path(const Trajectory& traj, std::size_t i, std::size_t j,
                               std::size_t steps, const BackwardConfig& bwd,
                               bool keep_paths = false);

}  // namespace efs

#include "efs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "efs/errors.hpp"
#include "parallel.hpp"

namespace efs {
namespace {

// Mean of K over all ordered pairs (a_i, b_j); ascending-index accumulation.
template <typename Kernel>
double kernel_mean(const ParticleSet& a, const ParticleSet& b, bool skip_diagonal,
                   const Kernel& kernel) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t d = a.dim();
  const double* xa = a.data();
  const double* xb = b.data();
  std::vector<double> rows(na, 0.0);
  detail::parallel_for(na, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      if (skip_diagonal && i == j) continue;
      double r2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = xa[i * d + c] - xb[j * d + c];
        r2 += diff * diff;
      }
      acc += kernel(r2);
    }
    rows[i] = acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double pairs = skip_diagonal ? static_cast<double>(na) * static_cast<double>(na - 1)
                                     : static_cast<double>(na) * static_cast<double>(nb);
  return total / pairs;
}

}  // namespace

double mmd_squared(const ParticleSet& a, const ParticleSet& b, const PotentialParams& p,
                   MmdEstimator estimator) {
  p.validate();
  if (a.empty() || b.empty()) throw InvalidInput("MMD needs two non-empty sets");
  if (a.dim() != b.dim()) throw InvalidInput("MMD sets differ in dimension");
  if (p.s <= 0.0) throw InvalidInput("MMD Riesz kernel requires s > 0 (s = 0 is unsupported)");

  const double s = p.s;
  if (estimator == MmdEstimator::kRegularizedV) {
    if (p.epsilon <= 0.0) throw InvalidInput("regularized MMD requires epsilon > 0");
    const double eps = p.epsilon;
    auto kernel = [s, eps](double r2) { return 1.0 / (s * std::pow(r2 + eps, 0.5 * s)); };
    return kernel_mean(a, a, false, kernel) + kernel_mean(b, b, false, kernel) -
           2.0 * kernel_mean(a, b, false, kernel);
  }

  if (a.size() < 2 || b.size() < 2) throw InvalidInput("U-statistic MMD needs >= 2 points per set");
  auto kernel = [s](double r2) {
    if (r2 == 0.0) throw SingularityError("unregularized Riesz kernel evaluated at distance 0");
    return 1.0 / (s * std::pow(r2, 0.5 * s));
  };
  return kernel_mean(a, a, true, kernel) + kernel_mean(b, b, true, kernel) -
         2.0 * kernel_mean(a, b, false, kernel);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidInput("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double circular_ks_statistic(std::vector<double> u) {
  if (u.empty()) throw InvalidInput("KS statistic of an empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  // Kuiper's V = D+ + D-; moving the origin shifts both by opposite constants.
  double above = 0.0;
  double below = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double di = static_cast<double>(i);
    above = std::max(above, (di + 1.0) / n - u[i]);
    below = std::max(below, u[i] - di / n);
  }
  return above + below;
}

UniformityReport uniformity_report(const ParticleSet& ps) {
  if (ps.size() < 10) {
    throw InvalidInput("uniformity report needs n >= 10, got " + std::to_string(ps.size()));
  }
  UniformityReport report;
  report.enclosure = estimate_enclosure(ps);
  const auto& c = report.enclosure.center;
  const std::size_t n = ps.size();
  const std::size_t d = ps.dim();

  std::vector<double> dist(n);
  double r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = (ps.row(i).transpose() - c).norm();
    r_max = std::max(r_max, dist[i]);
  }
  for (auto& r : dist) r /= r_max;
  const double dd = static_cast<double>(d);
  report.radial_ks = ks_statistic(std::move(dist), [dd](double u) { return std::pow(u, dd); });

  if (d == 2) {
    std::vector<double> angle(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = ps.row(i)[0] - c[0];
      const double y = ps.row(i)[1] - c[1];
      double a = std::atan2(y, x) / (2.0 * std::numbers::pi);
      if (a < 0.0) a += 1.0;
      if (a >= 1.0) a -= 1.0;
      angle[i] = a;
    }
    report.angular_ks = circular_ks_statistic(std::move(angle));
  }
  return report;
}

NoveltyStats nn_novelty(const ParticleSet& generated, const ParticleSet& training) {
  if (generated.empty() || training.empty()) throw InvalidInput("novelty needs non-empty sets");
  if (generated.dim() != training.dim()) throw InvalidInput("novelty sets differ in dimension");

  const std::size_t d = training.dim();
  auto nearest = [d](const double* q, const ParticleSet& set, std::size_t skip) {
    double best = std::numeric_limits<double>::infinity();
    const double* x = set.data();
    for (std::size_t a = 0; a < set.size(); ++a) {
      if (a == skip) continue;
      double r2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = q[c] - x[a * d + c];
        r2 += diff * diff;
      }
      best = std::min(best, r2);
    }
    return std::sqrt(best);
  };
  const std::size_t none = std::numeric_limits<std::size_t>::max();

  std::vector<double> gen_nn(generated.size());
  detail::parallel_for(generated.size(), [&](std::size_t q) {
    gen_nn[q] = nearest(generated.data() + q * d, training, none);
  });
  std::vector<double> self_nn(training.size());
  detail::parallel_for(training.size(), [&](std::size_t i) {
    self_nn[i] = nearest(training.data() + i * d, training, i);
  });

  NoveltyStats stats;
  stats.min_nn = *std::min_element(gen_nn.begin(), gen_nn.end());
  double sum = 0.0;
  for (double v : gen_nn) sum += v;
  stats.mean_nn = sum / static_cast<double>(gen_nn.size());
  if (training.size() < 2) {
    stats.self_nn_mean = std::numeric_limits<double>::quiet_NaN();
    return stats;
  }
  sum = 0.0;
  for (double v : self_nn) sum += v;
  stats.self_nn_mean = sum / static_cast<double>(self_nn.size());
  return stats;
}

std::vector<double> energy_trace(const Trajectory& traj) {
  std::vector<double> trace;
  trace.reserve(traj.snapshots().size());
  for (const auto& snap : traj.snapshots()) trace.push_back(interaction_energy(snap, traj.params()));
  return trace;
}

}  // namespace efs

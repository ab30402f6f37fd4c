#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "efs/backward.hpp"
#include "efs/datasets.hpp"
#include "efs/errors.hpp"
#include "efs/forward.hpp"
#include "efs/io.hpp"
#include "efs/metrics.hpp"
#include "efs/pipeline.hpp"
#include "efs/potential.hpp"
#include "efs/threads.hpp"

namespace py = pybind11;
using namespace efs;
using namespace pybind11::literals;

namespace {

PotentialParams params(double s, double epsilon) {
  PotentialParams p{s, epsilon};
  p.validate();
  return p;
}

BackwardConfig backward_config(double gamma, double beta, std::size_t T, double grad_tol,
                               const std::string& snapshot_mode) {
  BackwardConfig c;
  c.gamma = gamma;
  c.beta = beta;
  c.T = T;
  c.grad_tol = grad_tol;
  c.snapshot_mode = parse_snapshot_mode(snapshot_mode);
  return c;
}

GenerateOptions generate_options(std::size_t m, const std::string& mode, std::uint64_t seed, bool ball) {
  GenerateOptions o;
  o.m = m;
  o.mode = parse_augment_mode(mode);
  o.seed = seed;
  o.uniform_ball = ball;
  return o;
}

py::dict batch_dict(const SampleBatch& b) {
  py::dict out("generated"_a = b.generated, "seeds"_a = b.seeds(), "mode"_a = std::string(to_string(b.mode)));
  py::list starts;
  for (const auto& rec : b.provenance) starts.append(rec.start);
  out["starts"] = starts;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Estimation-free sampling core";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", error.ptr());
  py::register_exception<InstabilityError>(m, "InstabilityError", error.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  m.def("potential_value", [](const Vector& z, double s, double eps) { return potential_value(z, params(s, eps)); },
        "z"_a, "s"_a = 1.0, "epsilon"_a = 1e-3);
  m.def("potential_gradient",
        [](const Vector& z, double s, double eps) { return potential_gradient(z, params(s, eps)); }, "z"_a,
        "s"_a = 1.0, "epsilon"_a = 1e-3);
  m.def("pair_hessian_spectral_bound", [](double s, double eps) { return pair_hessian_spectral_bound(params(s, eps)); },
        "s"_a = 1.0, "epsilon"_a = 1e-3);
  m.def("interaction_energy",
        [](const Matrix& x, double s, double eps) { return interaction_energy(ParticleSet(x), params(s, eps)); },
        "x"_a, "s"_a = 1.0, "epsilon"_a = 1e-3);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("snapshots",
                             [](const Trajectory& t) {
                               std::vector<Matrix> out;
                               for (const auto& ps : t.snapshots()) out.push_back(ps.positions());
                               return out;
                             })
      .def_property_readonly("gamma", &Trajectory::gamma)
      .def_property_readonly("s", [](const Trajectory& t) { return t.params().s; })
      .def_property_readonly("epsilon", [](const Trajectory& t) { return t.params().epsilon; })
      .def_property_readonly("steps", &Trajectory::steps)
      .def("snapshot", [](const Trajectory& t, std::size_t j) { return t.snapshot(j).positions(); }, "j"_a)
      .def("energies", &energy_trace);

  m.def("run_forward",
        [](const Matrix& x, double gamma, std::size_t k, double s, double eps) {
          return run_forward(ParticleSet(x), gamma, k, params(s, eps));
        },
        "x"_a, "gamma"_a = 0.1, "k"_a = 31, "s"_a = 1.0, "epsilon"_a = 1e-3,
        py::call_guard<py::gil_scoped_release>());

  m.def("invert_step",
        [](const Vector& y, const Matrix& snap, double gamma, double beta, std::size_t T, double grad_tol, double s,
           double eps) {
          const auto r = invert_step(y, ParticleSet(snap), backward_config(gamma, beta, T, grad_tol, "exact"),
                                     params(s, eps));
          return py::dict("point"_a = r.point, "residual"_a = r.residual, "iterations"_a = r.iterations);
        },
        "y"_a, "snapshot"_a, "gamma"_a = 0.1, "beta"_a = 0.1, "T"_a = 300, "grad_tol"_a = 1e-10, "s"_a = 1.0,
        "epsilon"_a = 1e-3);

  m.def("run_backward",
        [](const Vector& y, const Trajectory& traj, double beta, std::size_t T, double grad_tol,
           const std::string& snapshot_mode) {
          const auto path =
              run_backward(y, traj, backward_config(traj.gamma(), beta, T, grad_tol, snapshot_mode));
          return py::dict("points"_a = path.points, "inner_residuals"_a = path.inner_residuals);
        },
        "y"_a, "trajectory"_a, "beta"_a = 0.1, "T"_a = 300, "grad_tol"_a = 1e-10, "snapshot_mode"_a = "paper");

  m.def("generate_from_trajectory",
        [](const Trajectory& traj, std::size_t m_, const std::string& mode, std::uint64_t seed, bool ball, double beta,
           std::size_t T, double grad_tol, const std::string& snapshot_mode) {
          const auto bwd = backward_config(traj.gamma(), beta, T, grad_tol, snapshot_mode);
          SampleBatch b;
          {
            py::gil_scoped_release release;
            b = generate_from_trajectory(traj, bwd, generate_options(m_, mode, seed, ball));
          }
          return batch_dict(b);
        },
        "trajectory"_a, "m"_a = 1, "mode"_a = "sphere", "seed"_a = 0, "ball"_a = false, "beta"_a = 0.1, "T"_a = 300,
        "grad_tol"_a = 1e-10, "snapshot_mode"_a = "paper");

  m.def("generate",
        [](const Matrix& x, std::size_t m_, double gamma, std::size_t k, double s, double eps, const std::string& mode,
           std::uint64_t seed, bool ball, double beta, std::size_t T, double grad_tol,
           const std::string& snapshot_mode) {
          const ForwardConfig fwd{gamma, k, params(s, eps)};
          const auto bwd = backward_config(gamma, beta, T, grad_tol, snapshot_mode);
          GenerateResult r;
          {
            py::gil_scoped_release release;
            r = efs_generate(ParticleSet(x), fwd, bwd, generate_options(m_, mode, seed, ball));
          }
          py::dict out = batch_dict(r.batch);
          out["trajectory"] = r.trajectory;
          return out;
        },
        "x"_a, "m"_a = 1, "gamma"_a = 0.1, "k"_a = 31, "s"_a = 1.0, "epsilon"_a = 1e-3, "mode"_a = "sphere",
        "seed"_a = 0, "ball"_a = false, "beta"_a = 0.1, "T"_a = 300, "grad_tol"_a = 1e-10,
        "snapshot_mode"_a = "paper");

  m.def("mmd_squared",
        [](const Matrix& a, const Matrix& b, double s, double eps, bool unregularized) {
          return mmd_squared(ParticleSet(a), ParticleSet(b), params(s, eps),
                             unregularized ? MmdEstimator::kUnregularizedU : MmdEstimator::kRegularizedV);
        },
        "a"_a, "b"_a, "s"_a = 1.0, "epsilon"_a = 1e-3, "unregularized"_a = false);
  m.def("uniformity_report", [](const Matrix& x) {
    const auto r = uniformity_report(ParticleSet(x));
    return py::dict("radial_ks"_a = r.radial_ks, "angular_ks"_a = r.angular_ks, "center"_a = r.enclosure.center,
                    "radius"_a = r.enclosure.radius);
  });
  m.def("nn_novelty", [](const Matrix& generated, const Matrix& training) {
    const auto r = nn_novelty(ParticleSet(generated), ParticleSet(training));
    return py::dict("min_nn"_a = r.min_nn, "mean_nn"_a = r.mean_nn, "self_nn_mean"_a = r.self_nn_mean);
  });

  m.def("gaussian_mixture",
        [](std::size_t n, std::uint64_t seed) {
          const auto lp = gaussian_mixture(n, MixtureSpec::default_2d(), seed);
          return py::make_tuple(lp.points.positions(), *lp.labels);
        },
        "n"_a, "seed"_a = 0);
  m.def("swiss_roll",
        [](std::size_t n, double noise, std::uint64_t seed) {
          const auto lp = swiss_roll(n, noise, seed);
          return py::make_tuple(lp.points.positions(), *lp.labels);
        },
        "n"_a, "noise"_a = 0.2, "seed"_a = 0);

  m.def("save_trajectory", [](const Trajectory& t, const std::string& path) { io::save_trajectory(t, path); },
        "trajectory"_a, "path"_a);
  m.def("load_trajectory", [](const std::string& path) { return io::load_trajectory(path); }, "path"_a);

  m.def("set_max_threads", &set_max_threads, "threads"_a);
  m.def("max_threads", &max_threads);
}

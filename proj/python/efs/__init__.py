"""Estimation-free sampling: forward particle transport and its backward inversion."""

from ._core import (
    DegenerateError,
    Error,
    InstabilityError,
    InvalidInput,
    IoError,
    SingularityError,
    Trajectory,
    gaussian_mixture,
    generate,
    generate_from_trajectory,
    interaction_energy,
    invert_step,
    load_trajectory,
    max_threads,
    mmd_squared,
    nn_novelty,
    pair_hessian_spectral_bound,
    potential_gradient,
    potential_value,
    run_backward,
    run_forward,
    save_trajectory,
    set_max_threads,
    swiss_roll,
    uniformity_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Staggered-grid immersed boundary solvers.

Composite (indicator-based, better-than-first-order, well-conditioned) and
prototypical continuous-forcing formulations of Dirichlet Poisson problems and
the incompressible Navier-Stokes equations, plus the benchmark studies.
"""

from ._core import (  # noqa: F401
    Body,
    Formulation,
    GridSpec,
    Kernel,
    Orientation,
    circle_body,
    couette_exact_vtheta,
    couette_jumps,
    couette_run,
    divergence,
    eval_kernel,
    gradient,
    identity_suite,
    laplacian_center,
    load_body,
    make_grid,
    markers_for_spacing,
    merge_bodies,
    moment_residual,
    poisson1d_solve,
    poisson2d_solve,
    run_couette_study,
    run_poisson1d_study,
    run_poisson2d_study,
    save_body,
)

__all__ = [
    "Body",
    "Formulation",
    "GridSpec",
    "Kernel",
    "Orientation",
    "circle_body",
    "couette_exact_vtheta",
    "couette_jumps",
    "couette_run",
    "divergence",
    "eval_kernel",
    "gradient",
    "identity_suite",
    "laplacian_center",
    "load_body",
    "make_grid",
    "markers_for_spacing",
    "merge_bodies",
    "moment_residual",
    "poisson1d_solve",
    "poisson2d_solve",
    "run_couette_study",
    "run_poisson1d_study",
    "run_poisson2d_study",
    "save_body",
]

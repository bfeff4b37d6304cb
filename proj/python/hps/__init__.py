"""High-order direct solver for -div(a grad phi) + b phi = 0 with Neumann data."""

from ._hps import (
    AnalyticSolution,
    NeumannData,
    Problem,
    ScalarField,
    Solution,
    Solver,
    Tree,
    analytic_suite,
    bump_field,
    constant_field,
    cosh_x_solution,
    cross_path,
    exp_y_solution,
    fd_solve,
    gauss_legendre,
    oscillatory_field,
    plane_wave_solution,
    radial_solution,
    run_command,
    zero_data,
)

__all__ = [
    "AnalyticSolution",
    "NeumannData",
    "Problem",
    "ScalarField",
    "Solution",
    "Solver",
    "Tree",
    "analytic_suite",
    "bump_field",
    "constant_field",
    "cosh_x_solution",
    "cross_path",
    "exp_y_solution",
    "fd_solve",
    "gauss_legendre",
    "oscillatory_field",
    "plane_wave_solution",
    "radial_solution",
    "run_command",
    "zero_data",
]

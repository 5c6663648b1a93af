"""Composite-vs-composite testing by linear programming with dual certificates."""

from npdual._core import (
    Error,
    Problem,
    analyze,
    classic_np,
    dual_objective,
    evaluate_power,
    evaluate_size,
    gaussian_case_spec,
    grid_bruteforce,
    load_problem,
    make_problem,
    solve,
    solve_gaussian,
)

__all__ = [
    "Error",
    "Problem",
    "analyze",
    "classic_np",
    "dual_objective",
    "evaluate_power",
    "evaluate_size",
    "gaussian_case_spec",
    "grid_bruteforce",
    "load_problem",
    "make_problem",
    "solve",
    "solve_gaussian",
]

"""Bound states of the two-dimensional Schrödinger-Newton system.

Shooting solver for the universal radial system, scaling relations to
physical (gamma, lambda, omega) branches, energy functionals on radial
profiles, a sharp logarithmic HLS checker and a variational cross-check.
"""

from sn2d.branch import (
    PAPER_APPENDIX,
    BoundState,
    BranchConstants,
    BranchPoint,
    e0_of_lambda,
    lambdas_of_omega,
    omega_of_lambda,
    omega_star,
    rescale_to_physical,
)
from sn2d.errors import Sn2dError
from sn2d.functionals import RadialProfile, kinetic, log_moment, particle_number, potential_v
from sn2d.hls import HlsReport, builtin_profile, dilation_scan, hls_check
from sn2d.oracle import gradient_selftest, minimize_energy
from sn2d.radial_ode import IntegratorConfig, OdeState, Outcome, integrate_universal, series_start
from sn2d.shooting import ShootingConfig, UniversalSolution, solve_universal, validate_solution

__version__ = "0.1.0"

__all__ = [
    "PAPER_APPENDIX",
    "BoundState",
    "BranchConstants",
    "BranchPoint",
    "HlsReport",
    "IntegratorConfig",
    "OdeState",
    "Outcome",
    "RadialProfile",
    "ShootingConfig",
    "Sn2dError",
    "UniversalSolution",
    "builtin_profile",
    "dilation_scan",
    "e0_of_lambda",
    "gradient_selftest",
    "hls_check",
    "integrate_universal",
    "kinetic",
    "lambdas_of_omega",
    "log_moment",
    "minimize_energy",
    "omega_of_lambda",
    "omega_star",
    "particle_number",
    "potential_v",
    "rescale_to_physical",
    "series_start",
    "solve_universal",
    "validate_solution",
]

"""Buckley-Leverett Riemann problems with play-type capillary hysteresis.

Exact vanishing-capillarity solutions (``waves``), the travelling waves
behind their shocks (``travelling_wave``) and a parabolic simulator used to
cross-check them (``pde``).
"""

from .charpoints import characteristic_points, check_S_T, find_landmarks, find_star_pair, hat_S, problem_points, tangent_point
from .constitutive import CapillaryCurve, FluxModel, HysteresisCurves, curve_preset, play_type_pressure_rate
from .errors import (
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    NoSignChange,
    NonlinearSolveFailure,
    NotAdmissible,
    StiffError,
)
from .waves import (
    eval_solution,
    oleinik_admissible,
    rh_speed,
    solve_riemann_classical,
    solve_riemann_hysteretic,
    stationary_admissible,
    weak_solution_check,
)

__version__ = "0.1.0"

from .ode import (Trajectory, StepSizeUnderflow, NonFiniteState,
                  ode_integrate, solve_to_grid)
from .quad import (QuadratureRule, QuadratureError, gauss_legendre,
                   panel_integral, integrate_decaying)
from .linalg import determinant, log_determinant

__all__ = [
    "Trajectory", "StepSizeUnderflow", "NonFiniteState", "ode_integrate",
    "solve_to_grid", "QuadratureRule", "QuadratureError", "gauss_legendre",
    "panel_integral", "integrate_decaying", "determinant", "log_determinant",
]

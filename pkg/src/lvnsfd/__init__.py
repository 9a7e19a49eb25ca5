"""Nonstandard finite difference integration of the Lotka-Volterra equations."""

__version__ = "0.1.0"

from .errors import DomainError, InvariantError, LVError, NotFoundError, NumericError, RegimeError
from .model import (
    FixedPointSet,
    OdeClassification,
    Params,
    State,
    classify_ode_fixed_point,
    first_integral,
    fixed_points,
    vector_field,
)
from .schemes import (
    SchemeKind,
    Trajectory,
    euler_step,
    exact_decoupled,
    nsfd_step,
    phi1,
    phi2,
    rk4_step,
    simulate,
    simulate_batch,
)
from .analysis import (
    consistency_report,
    convergence_order,
    discrete_jacobian,
    oscillation_period,
    positivity_scan,
    recurrence_coefficient,
    spectral_report,
)

"""Continuous-time Lotka-Volterra model.

    dx/dt = a x - b x y
    dy/dt = -c y + d x y

with prey ``x``, predator ``y`` and non-negative rate constants.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from .errors import DomainError, NotFoundError

Which = Literal["origin", "interior"]


@dataclass(frozen=True)
class Params:
    """Rate constants (a, b, c, d), all finite and non-negative."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"parameter {name}={v!r} must be finite and >= 0")
            object.__setattr__(self, name, float(v))

    @property
    def has_interior(self) -> bool:
        """True when the coexistence fixed point (c/d, a/b) is defined."""
        return self.b > 0 and self.d > 0

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class State:
    """A point (x, y) of the phase plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"state ({self.x!r}, {self.y!r}) is not finite")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    @property
    def is_positive(self) -> bool:
        return self.x > 0 and self.y > 0

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class FixedPointSet:
    origin: State
    interior: Optional[State]


@dataclass(frozen=True)
class OdeClassification:
    which: str
    kind: str
    eigenvalues: Tuple[complex, complex]


def vector_field(params: Params, s: State) -> Tuple[float, float]:
    """Right-hand side of the ODE at ``s``."""
    x, y = s.x, s.y
    a, b, c, d = params.as_tuple()
    return (a * x - b * x * y, -c * y + d * x * y)


def fixed_points(params: Params) -> FixedPointSet:
    interior = None
    if params.has_interior:
        interior = State(params.c / params.d, params.a / params.b)
    return FixedPointSet(origin=State(0.0, 0.0), interior=interior)


def first_integral(params: Params, s: State) -> float:
    """Conserved quantity V = d x - c ln x + b y - a ln y.

    Constant along exact solutions; used only as a drift/boundedness
    diagnostic for discrete trajectories.
    """
    if not (s.x > 0 and s.y > 0):
        raise DomainError(f"first integral needs x > 0 and y > 0, got ({s.x}, {s.y})")
    a, b, c, d = params.as_tuple()
    return d * s.x - c * math.log(s.x) + b * s.y - a * math.log(s.y)


def jacobian(params: Params, s: State) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Analytic Jacobian of the vector field."""
    a, b, c, d = params.as_tuple()
    return ((a - b * s.y, -b * s.x), (d * s.y, -c + d * s.x))


def classify_ode_fixed_point(params: Params, which: Which) -> OdeClassification:
    """Closed-form linear classification of a fixed point of the ODE.

    The origin has eigenvalues (a, -c), a hyperbolic saddle; the interior
    point has eigenvalues +-i sqrt(ac), a neutral center.
    """
    a, c = params.a, params.c
    if not (a > 0 and c > 0):
        raise DomainError("classification requires a > 0 and c > 0")
    if which == "origin":
        return OdeClassification("origin", "unstable_hyperbolic", (complex(a, 0.0), complex(-c, 0.0)))
    if which == "interior":
        if not params.has_interior:
            raise NotFoundError("interior fixed point does not exist (b = 0 or d = 0)")
        w = math.sqrt(a * c)
        return OdeClassification("interior", "neutral_center", (complex(0.0, w), complex(0.0, -w)))
    raise DomainError(f"unknown fixed point {which!r}")


def ode_eigenvalues(params: Params, s: State) -> Tuple[complex, complex]:
    """Numerical eigenvalues of the Jacobian at an arbitrary state."""
    (j11, j12), (j21, j22) = jacobian(params, s)
    tr = j11 + j22
    det = j11 * j22 - j12 * j21
    root = cmath.sqrt(tr * tr - 4 * det)
    return ((tr + root) / 2, (tr - root) / 2)

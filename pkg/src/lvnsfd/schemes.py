"""One-step maps for the Lotka-Volterra system and the simulation loop.

Three schemes are provided:

* ``nsfd``: the nonstandard finite difference scheme with exact denominator
  functions and the nonlocal product ``x y -> x_{k+1} y_k``;
* ``euler``: forward Euler, kept unmodified as the negative control;
* ``reference``: classical RK4, used as an accuracy oracle.

Every scheme is built as a *stepper*: a closure over precomputed
coefficients that maps ``(x, y)`` to the next state with plain arithmetic.
The same closure therefore works on Python floats and on numpy arrays,
which is what ``simulate_batch`` relies on.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional, Tuple

import numpy as np

from .errors import DomainError, InvariantError, NumericError
from .model import Params, State

Stepper = Callable[[object, object], Tuple[object, object]]

# below this |a h| the denominator functions use their Taylor expansion
SERIES_CUTOFF = 1e-8


class SchemeKind(str, enum.Enum):
    NSFD = "nsfd"
    EULER = "euler"
    REFERENCE = "reference"

    def __str__(self) -> str:
        return self.value


def scheme_kind(tag) -> SchemeKind:
    try:
        return SchemeKind(tag)
    except ValueError:
        raise DomainError(f"unknown scheme {tag!r}") from None


def check_step(h: float) -> float:
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise DomainError(f"step size must be finite and > 0, got {h!r}")
    return float(h)


def _denominator(rate, h, sign: float):
    """(e^{sign*rate*h} - 1) / (sign*rate), with the rate -> 0 limit h."""
    rate = np.asarray(rate, dtype=float)
    h = np.asarray(h, dtype=float)
    z = sign * rate * h
    small = np.abs(z) < SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        exact = np.expm1(z) / (sign * rate)
    series = h * (1.0 + z / 2.0 + z * z / 6.0)
    out = np.where(small, series, exact)
    if np.any(np.isinf(out)):
        raise OverflowError("denominator function overflowed (rate * h too large)")
    return float(out) if out.ndim == 0 else out


def phi1(a, h):
    """Prey denominator function (e^{ah} - 1)/a; equals h when a = 0.

    Accepts scalars or numpy arrays.
    """
    if np.any(np.asarray(a) < 0) or np.any(np.asarray(h) <= 0):
        raise DomainError("phi1 needs a >= 0 and h > 0")
    return _denominator(a, h, 1.0)


def phi2(c, h):
    """Predator denominator function (1 - e^{-ch})/c; equals h when c = 0."""
    if np.any(np.asarray(c) < 0) or np.any(np.asarray(h) <= 0):
        raise DomainError("phi2 needs c >= 0 and h > 0")
    return _denominator(c, h, -1.0)


def _decay_factor(c, h, p2):
    # 1 - c*phi2 is e^{-ch}; it keeps the fixed points bit-exact but loses
    # relative accuracy once e^{-ch} is small, so switch to exp() there.
    cp = np.asarray(c, dtype=float) * p2
    out = np.where(cp <= 0.5, 1.0 - cp, np.exp(-np.asarray(c, dtype=float) * h))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NsfdCoefficients:
    phi1: object
    phi2: object
    growth: object  # e^{ah}
    decay: object  # e^{-ch}


def nsfd_coefficients(a, c, h) -> NsfdCoefficients:
    p1 = phi1(a, h)
    p2 = phi2(c, h)
    growth = 1.0 + a * p1
    return NsfdCoefficients(p1, p2, growth, _decay_factor(c, h, p2))


def make_stepper(scheme, a, b, c, d, h) -> Stepper:
    """Return an unchecked one-step map ``(x, y) -> (x', y')``.

    Parameters may be floats or broadcastable numpy arrays.  No domain
    checks are applied to the state; callers that need them use the
    ``*_step`` functions.
    """
    scheme = scheme_kind(scheme)
    if scheme is SchemeKind.NSFD:
        co = nsfd_coefficients(a, c, h)
        g, bp1 = co.growth, b * co.phi1
        dec, dp2 = co.decay, d * co.phi2

        def step(x, y):
            # x' first; y' must reuse exactly this x' (nonlocal x_{k+1} y_k)
            xn = g * x / (1.0 + bp1 * y)
            return xn, (dec + dp2 * xn) * y

    elif scheme is SchemeKind.EULER:

        def step(x, y):
            return x + h * (a * x - b * x * y), y + h * (-c * y + d * x * y)

    else:
        h2, h6 = h / 2.0, h / 6.0

        def f(x, y):
            return a * x - b * x * y, -c * y + d * x * y

        def step(x, y):
            k1x, k1y = f(x, y)
            k2x, k2y = f(x + h2 * k1x, y + h2 * k1y)
            k3x, k3y = f(x + h2 * k2x, y + h2 * k2y)
            k4x, k4y = f(x + h * k3x, y + h * k3y)
            return (
                x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
            )

    return step


class NsfdTrace(NamedTuple):
    """Intermediates of one NSFD step, exposed for auditing."""

    phi1: float
    phi2: float
    growth: float
    decay: float
    x_new: float
    y_factor: float
    y_new: float


def nsfd_step_trace(params: Params, s: State, h: float) -> NsfdTrace:
    h = check_step(h)
    if s.x < 0 or s.y < 0:
        raise DomainError(f"nsfd step needs a non-negative state, got ({s.x}, {s.y})")
    a, b, c, d = params.as_tuple()
    co = nsfd_coefficients(a, c, h)
    x_new = co.growth * s.x / (1.0 + b * co.phi1 * s.y)
    y_factor = co.decay + d * co.phi2 * x_new
    return NsfdTrace(co.phi1, co.phi2, co.growth, co.decay, x_new, y_factor, y_factor * s.y)


def nsfd_step(params: Params, s: State, h: float) -> State:
    """One step of the NSFD scheme.

    Solving the scheme for the new values gives the explicit update

        x' = e^{ah} x / (1 + b phi1 y),   y' = (e^{-ch} + d phi2 x') y

    which maps the closed positive quadrant into itself for every h > 0.
    """
    tr = nsfd_step_trace(params, s, h)
    return State(tr.x_new, tr.y_new)


def euler_step(params: Params, s: State, h: float) -> State:
    """Forward Euler step. Deliberately unprojected: it can leave the quadrant."""
    h = check_step(h)
    return State(*make_stepper(SchemeKind.EULER, *params.as_tuple(), h)(s.x, s.y))


def rk4_step(params: Params, s: State, h: float) -> State:
    h = check_step(h)
    x, y = make_stepper(SchemeKind.REFERENCE, *params.as_tuple(), h)(s.x, s.y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NumericError("rk4 step produced a non-finite state")
    return State(x, y)


STEP_FUNCTIONS = {
    SchemeKind.NSFD: nsfd_step,
    SchemeKind.EULER: euler_step,
    SchemeKind.REFERENCE: rk4_step,
}


class TrajectoryPoint(NamedTuple):
    k: int
    t: float
    state: State
    v: Optional[float]


@dataclass
class Trajectory:
    """Result of ``simulate``.

    ``v`` holds the first integral where both components are positive and
    NaN elsewhere.  ``truncated_at`` is the step index of the first state
    that could not be represented (overflow, NaN, or an NSFD component
    underflowing to zero); that state is not stored.
    """

    params: Params
    scheme: SchemeKind
    h: float
    k: np.ndarray
    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    truncated_at: Optional[int] = None
    truncation_reason: Optional[str] = None

    @property
    def t(self) -> np.ndarray:
        return self.h * self.k.astype(float)

    @property
    def truncated(self) -> bool:
        return self.truncated_at is not None

    def __len__(self) -> int:
        return len(self.k)

    def state(self, i: int) -> State:
        return State(float(self.x[i]), float(self.y[i]))

    @property
    def points(self) -> Iterator[TrajectoryPoint]:
        for i in range(len(self.k)):
            v = float(self.v[i])
            yield TrajectoryPoint(int(self.k[i]), self.h * int(self.k[i]), self.state(i),
                                  None if math.isnan(v) else v)


def simulate(scheme, params: Params, s0: State, h: float, n: int,
             record_v: bool = True) -> Trajectory:
    """Iterate a scheme ``n`` times from ``s0``.

    Stops early, with ``truncated_at`` set, when the next state is not
    representable in double precision.
    """
    scheme = scheme_kind(scheme)
    h = check_step(h)
    if n < 0:
        raise DomainError("step count must be >= 0")
    if scheme is SchemeKind.NSFD and (s0.x < 0 or s0.y < 0):
        raise DomainError("nsfd needs a non-negative initial state")

    step = make_stepper(scheme, *params.as_tuple(), h)
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0], ys[0] = x, y = s0.x, s0.y
    last = n
    reason = None
    isfinite = math.isfinite
    with np.errstate(all="ignore"):
        for k in range(1, n + 1):
            try:
                xn, yn = step(x, y)
            except (OverflowError, ZeroDivisionError):
                xn = yn = math.nan
            if not (isfinite(xn) and isfinite(yn)):
                last, reason = k - 1, "non-finite"
                break
            if scheme is SchemeKind.NSFD:
                if xn < 0 or yn < 0:
                    raise InvariantError(f"nsfd produced a negative state at k={k}")
                if (x > 0 and xn == 0) or (y > 0 and yn == 0):
                    last, reason = k - 1, "underflow"
                    break
            xs[k], ys[k] = x, y = xn, yn

    xs, ys = xs[: last + 1], ys[: last + 1]
    vs = np.full(last + 1, np.nan)
    if record_v:
        pos = (xs > 0) & (ys > 0)
        a, b, c, d = params.as_tuple()
        vs[pos] = d * xs[pos] - c * np.log(xs[pos]) + b * ys[pos] - a * np.log(ys[pos])
    return Trajectory(params, scheme, h, np.arange(last + 1), xs, ys, vs,
                      truncated_at=None if reason is None else last + 1,
                      truncation_reason=reason)


@dataclass
class BatchResult:
    """Summary of many independent trajectories run in lockstep."""

    min_component: np.ndarray
    max_component: np.ndarray
    # first step whose state is non-positive or non-finite; -1 if none
    first_bad_step: np.ndarray
    x: np.ndarray
    y: np.ndarray
    n: int = field(default=0)


def simulate_batch(scheme, a, b, c, d, x0, y0, h, n: int) -> BatchResult:
    """Run the same scheme for arrays of parameters and initial states.

    Uses the same stepper arithmetic as ``simulate``; only summary
    statistics are kept so 10^3 x 10^4 step runs fit comfortably in memory.
    """
    arrs = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c, d, x0, y0, h)))
    a, b, c, d, x, y, h = (v.copy() for v in arrs)
    step = make_stepper(scheme, a, b, c, d, h)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    bad = np.full(x.shape, -1, dtype=int)
    with np.errstate(all="ignore"):
        for k in range(1, n + 1):
            x, y = step(x, y)
            ok = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
            bad = np.where((bad < 0) & ~ok, k, bad)
            lo = np.fmin(lo, np.minimum(x, y))
            hi = np.fmax(hi, np.maximum(x, y))
    return BatchResult(lo, hi, bad, x, y, n)


def exact_decoupled(params: Params, s0: State, h: float, k: int) -> State:
    """Closed-form NSFD iterate on an invariant axis.

    Prey only: x_k = x0 e^{ahk}.  Predator only: y_k = y0 e^{-chk}.
    """
    h = check_step(h)
    if k < 0:
        raise DomainError("step index must be >= 0")
    if s0.x != 0 and s0.y != 0:
        raise DomainError("decoupled closed form undefined: both components nonzero")
    if k == 0:
        return s0
    if s0.y == 0:
        return State(s0.x * math.exp(params.a * h * k), 0.0)
    return State(0.0, s0.y * math.exp(-params.c * h * k))

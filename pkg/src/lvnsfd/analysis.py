"""Dynamic-consistency analysis of the discrete schemes.

Covers linearization of one-step maps at fixed points, spectral
classification, the second-order perturbation recurrence of the NSFD
scheme, positivity scans, convergence studies and the aggregated
five-property consistency report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, NotFoundError, NumericError, RegimeError
from .model import Params, State, fixed_points
from .schemes import (
    SchemeKind,
    check_step,
    exact_decoupled,
    make_stepper,
    nsfd_coefficients,
    phi1,
    phi2,
    scheme_kind,
    simulate,
)

Matrix = Tuple[Tuple[float, float], Tuple[float, float]]

FD_RELATIVE_STEP = 1e-6
NEUTRAL_TOL = 1e-8
# neutrality tolerance for closed-form maps, which carry only round-off
EXACT_NEUTRAL_TOL = 1e-12
# tolerance for agreement between finite-difference and closed-form Jacobians
CROSSCHECK_TOL = 1e-6


@dataclass(frozen=True)
class LinearizedMap:
    """Jacobian of a one-step map at a fixed point.

    Acts on perturbations (alpha, beta) of the base point.
    """

    m11: float
    m12: float
    m21: float
    m22: float
    base_point: State
    scheme: SchemeKind
    h: float
    closed_form: Optional[Matrix] = None

    @property
    def matrix(self) -> Matrix:
        return ((self.m11, self.m12), (self.m21, self.m22))

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def determinant(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @classmethod
    def from_matrix(cls, m, base_point=State(0.0, 0.0), scheme=SchemeKind.NSFD, h=1.0):
        (m11, m12), (m21, m22) = m
        return cls(float(m11), float(m12), float(m21), float(m22), base_point,
                   scheme_kind(scheme), h)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: Tuple[complex, complex]
    moduli: Tuple[float, float]
    determinant: float
    trace: float
    regime: str
    # repeated eigenvalue (zero discriminant), e.g. the identity map
    degenerate: bool = False


@dataclass(frozen=True)
class RecurrenceCoefficient:
    """Coefficient K of z_{k+1} - (2 - K) z_k + z_{k-1} = 0.

    ``K`` is a c phi1 phi2, the coefficient of the printed perturbation
    recurrence.  ``linearized`` is the coefficient obtained by linearizing
    the NSFD update exactly, a c phi1 phi2 e^{-ah}; the two agree to
    leading order in h.
    """

    K: float
    regime: str
    linearized: float

    def roots(self) -> Tuple[complex, complex]:
        half = (2.0 - self.K) / 2.0
        disc = half * half - 1.0
        if disc < 0:
            im = math.sqrt(-disc)
            return (complex(half, im), complex(half, -im))
        # constant term is 1: take the larger root and invert it
        big = half + math.copysign(math.sqrt(disc), half)
        return (complex(big, 0.0), complex(1.0 / big, 0.0))


@dataclass(frozen=True)
class PositivityWitness:
    params: Params
    s0: State
    h: float
    step: int
    state: State


@dataclass
class ConvergenceReport:
    scheme: SchemeKind
    params: Params
    s0: State
    T: float
    h_values: List[float]
    errors: List[float]
    orders: List[float]
    h_ref: float
    degenerate: bool = False


@dataclass
class Verdict:
    name: str
    passed: bool
    evidence: Dict[str, object] = field(default_factory=dict)


@dataclass
class ConsistencyReport:
    scheme: SchemeKind
    params: Params
    h: float
    verdicts: List[Verdict]

    PROPERTIES = ("positivity", "fixed_points", "stability", "decoupled", "oscillation")

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def n_passed(self) -> int:
        return sum(v.passed for v in self.verdicts)

    @property
    def all_passed(self) -> bool:
        return self.n_passed == len(self.PROPERTIES)


def _base_point(params: Params, at: str) -> State:
    fps = fixed_points(params)
    if at == "origin":
        return fps.origin
    if at != "interior":
        raise DomainError(f"unknown fixed point {at!r}")
    if fps.interior is None:
        raise NotFoundError("interior fixed point does not exist (b = 0 or d = 0)")
    return fps.interior


def closed_form_jacobian(scheme, params: Params, h: float, at: str = "interior") -> Optional[Matrix]:
    """Analytic linearization of a scheme at a fixed point, where derived.

    NSFD at (c/d, a/b) gives [[1, -p], [q, 1 - pq]] with
    p = phi1 (b c / d) e^{-ah} and q = phi2 (a d / b), so det = 1.
    At the origin it is diag(e^{ah}, e^{-ch}).  Euler gives I + h J.
    """
    scheme = scheme_kind(scheme)
    a, b, c, d = params.as_tuple()
    if scheme is SchemeKind.NSFD:
        if at == "origin":
            co = nsfd_coefficients(a, c, h)
            return ((co.growth, 0.0), (0.0, co.decay))
        p = phi1(a, h) * (b * c / d) * math.exp(-a * h)
        q = phi2(c, h) * (a * d / b)
        return ((1.0, -p), (q, 1.0 - p * q))
    if scheme is SchemeKind.EULER:
        s = _base_point(params, at)
        return ((1.0 + h * (a - b * s.y), -h * b * s.x), (h * d * s.y, 1.0 + h * (-c + d * s.x)))
    return None


def discrete_jacobian(scheme, params: Params, h: float, at: str = "interior") -> LinearizedMap:
    """Central finite-difference Jacobian of a one-step map at a fixed point.

    Each coordinate is perturbed by 1e-6 times its own value (1e-6 at the
    origin), so widely different scales of c/d and a/b stay resolved.
    Where a closed form is known the two are compared and a mismatch raises
    ``NumericError``.
    """
    scheme = scheme_kind(scheme)
    h = check_step(h)
    base = _base_point(params, at)
    if at == "interior":
        dx, dy = FD_RELATIVE_STEP * base.x, FD_RELATIVE_STEP * base.y
    else:
        dx = dy = FD_RELATIVE_STEP
    step = make_stepper(scheme, *params.as_tuple(), h)

    with np.errstate(all="ignore"):
        xp = step(base.x + dx, base.y)
        xm = step(base.x - dx, base.y)
        yp = step(base.x, base.y + dy)
        ym = step(base.x, base.y - dy)
    cols = [[(p - m) / (2 * dx) for p, m in zip(xp, xm)],
            [(p - m) / (2 * dy) for p, m in zip(yp, ym)]]
    m11, m21 = cols[0]
    m12, m22 = cols[1]
    entries = (m11, m12, m21, m22)
    if not all(math.isfinite(e) for e in entries):
        raise NumericError("finite-difference Jacobian is not finite")

    cf = closed_form_jacobian(scheme, params, h, at)
    if cf is not None:
        flat = (cf[0][0], cf[0][1], cf[1][0], cf[1][1])
        tol = CROSSCHECK_TOL * max(1.0, max(abs(v) for v in flat))
        if max(abs(e - v) for e, v in zip(entries, flat)) > tol:
            raise NumericError(f"finite-difference Jacobian disagrees with closed form {cf}")
    return LinearizedMap(m11, m12, m21, m22, base, scheme, h, cf)


def spectral_report(m: LinearizedMap, tol: float = NEUTRAL_TOL) -> SpectralReport:
    """Eigenvalues of a 2x2 map and its dynamical regime.

    Non-real eigenvalues give ``neutral_rotation`` (modulus 1 within 1e-8),
    ``expanding_spiral`` or ``contracting``; real ones give ``contracting``
    when both lie inside the unit circle and ``real_split`` otherwise.
    ``tol`` is the allowed distance of the modulus from 1 for a neutral
    rotation.
    """
    entries = (m.m11, m.m12, m.m21, m.m22)
    if not all(math.isfinite(e) for e in entries):
        raise NumericError("map entries must be finite")
    tr, det = m.trace, m.determinant
    disc = tr * tr - 4.0 * det
    if disc < 0:
        im = math.sqrt(-disc) / 2.0
        eig = (complex(tr / 2.0, im), complex(tr / 2.0, -im))
    else:
        r = math.sqrt(disc)
        # avoid cancellation in the smaller root
        big = (tr + math.copysign(r, tr)) / 2.0
        small = det / big if big != 0 else (tr - math.copysign(r, tr)) / 2.0
        eig = (complex(big, 0.0), complex(small, 0.0))
    moduli = (abs(eig[0]), abs(eig[1]))

    if disc < 0:
        mod = math.sqrt(det)
        if abs(mod - 1.0) <= tol:
            regime = "neutral_rotation"
        elif mod > 1.0:
            regime = "expanding_spiral"
        else:
            regime = "contracting"
    else:
        regime = "contracting" if max(moduli) < 1.0 else "real_split"
    return SpectralReport(eig, moduli, det, tr, regime, degenerate=disc == 0)


def recurrence_coefficient(params: Params, h: float) -> RecurrenceCoefficient:
    h = check_step(h)
    a, c = params.a, params.c
    K = a * c * phi1(a, h) * phi2(c, h)
    if K == 0.0 or K == 4.0:
        regime = "degenerate"
    elif K < 4.0:
        regime = "oscillatory"
    else:
        regime = "real_roots"
    return RecurrenceCoefficient(K, regime, K * math.exp(-a * h))


def oscillation_period(params: Params, h: float) -> Tuple[float, float]:
    """Continuous period 2 pi / sqrt(ac) and the discrete one 2 pi h / theta.

    theta = arccos(1 - K/2) is the rotation angle per step of the
    perturbation recurrence.
    """
    a, c = params.a, params.c
    if not (a > 0 and c > 0):
        raise DomainError("oscillation period needs a > 0 and c > 0")
    rc = recurrence_coefficient(params, h)
    if rc.regime != "oscillatory":
        raise RegimeError(f"discrete linearization non-oscillatory at this h (K={rc.K!r})")
    theta = math.acos(1.0 - rc.K / 2.0)
    return 2.0 * math.pi / math.sqrt(a * c), 2.0 * math.pi * h / theta


def positivity_scan(scheme, params: Params, ic_grid: Sequence[State],
                    h_list: Sequence[float], n: int) -> Optional[PositivityWitness]:
    """First state with a negative component, scanning ICs, then h, then steps."""
    scheme = scheme_kind(scheme)
    if not ic_grid or not h_list:
        raise DomainError("positivity scan needs a non-empty grid and step list")
    for s in ic_grid:
        if not s.is_positive:
            raise DomainError(f"initial condition ({s.x}, {s.y}) is not strictly positive")
    for s0 in ic_grid:
        for h in h_list:
            h = check_step(h)
            step = make_stepper(scheme, *params.as_tuple(), h)
            x, y = s0.x, s0.y
            with np.errstate(all="ignore"):
                for k in range(1, n + 1):
                    x, y = step(x, y)
                    if not (math.isfinite(x) and math.isfinite(y)):
                        break
                    if x < 0 or y < 0:
                        return PositivityWitness(params, s0, h, k, State(x, y))
    return None


def _run_to(step, s0: State, n: int) -> Tuple[float, float]:
    x, y = s0.x, s0.y
    with np.errstate(all="ignore"):
        for _ in range(n):
            x, y = step(x, y)
    return x, y


def _steps_for(T: float, h: float) -> int:
    n = round(T / h)
    if n < 1 or abs(n * h - T) > 1e-9 * max(1.0, T):
        raise DomainError(f"horizon T={T} is not an integer multiple of h={h}")
    return n


def convergence_order(scheme, params: Params, s0: State, T: float, h0: float,
                      levels: int) -> ConvergenceReport:
    """Observed global order of a scheme against an RK4 reference.

    Step sizes are h0, h0/2, ..., h0/2^(levels-1); the reference uses
    h0/2^(levels+3).  Errors are max-norm distances at time T.  A study
    whose errors are all at round-off level (e.g. started at a fixed point)
    is flagged ``degenerate`` and reports no orders.
    """
    scheme = scheme_kind(scheme)
    h0 = check_step(h0)
    if levels < 2:
        raise DomainError("convergence study needs levels >= 2")
    if not s0.is_positive:
        raise DomainError("convergence study needs a strictly positive start")
    n0 = _steps_for(T, h0)
    p = params.as_tuple()

    h_ref = h0 / 2 ** (levels + 3)
    ref = _run_to(make_stepper(SchemeKind.REFERENCE, *p, h_ref), s0, n0 * 2 ** (levels + 3))
    if not all(math.isfinite(v) for v in ref):
        raise NumericError("reference trajectory is not finite")

    hs, errs = [], []
    for i in range(levels):
        h = h0 / 2 ** i
        xT, yT = _run_to(make_stepper(scheme, *p, h), s0, n0 * 2 ** i)
        hs.append(h)
        errs.append(max(abs(xT - ref[0]), abs(yT - ref[1])))
    if not all(math.isfinite(e) for e in errs):
        raise NumericError("scheme trajectory is not finite")

    scale = 1.0 + max(abs(ref[0]), abs(ref[1]))
    degenerate = max(errs) <= 1e-12 * scale
    orders = [] if degenerate else [math.log2(errs[i] / errs[i + 1]) for i in range(levels - 1)]
    return ConvergenceReport(scheme, params, s0, T, hs, errs, orders, h_ref, degenerate)


# initial-condition grid used by the consistency report (prey-major order)
REPORT_GRID_VALUES = (0.5, 1.0, 2.0, 3.0, 5.0)
REPORT_GRID = tuple(State(x, y) for x in REPORT_GRID_VALUES for y in REPORT_GRID_VALUES)
# positivity is scanned over this horizon (in time units), i.e. ceil(1/h) steps
REPORT_HORIZON = 1.0
REPORT_DECOUPLED_STEPS = 20
FIXED_POINT_TOL = 1e-14
DECOUPLED_TOL = 1e-10


def _check_positivity(scheme, params, h) -> Verdict:
    n = max(1, math.ceil(REPORT_HORIZON / h - 1e-9))
    w = positivity_scan(scheme, params, REPORT_GRID, [h], n)
    ev = {"grid_size": len(REPORT_GRID), "steps": n, "witness": w}
    return Verdict("positivity", w is None, ev)


def _check_fixed_points(scheme, params, h) -> Verdict:
    step = make_stepper(scheme, *params.as_tuple(), h)
    fps = fixed_points(params)
    errors = {}
    for name, s in (("origin", fps.origin), ("interior", fps.interior)):
        xn, yn = step(s.x, s.y)
        scale = max(abs(s.x), abs(s.y))
        dist = max(abs(xn - s.x), abs(yn - s.y))
        errors[name] = dist / scale if scale > 0 else dist
    ok = all(math.isfinite(e) and e <= FIXED_POINT_TOL for e in errors.values())
    return Verdict("fixed_points", ok, {"relative_errors": errors})


def _exact_or_fd(scheme, params, h, at):
    # finite differences cannot resolve moduli within ~1e-8 of 1 (Euler
    # at h = 1e-4 has modulus 1 + 5e-9), so prefer the closed form
    m = discrete_jacobian(scheme, params, h, at=at)
    if m.closed_form is None:
        return spectral_report(m)
    exact = LinearizedMap.from_matrix(m.closed_form, m.base_point, scheme, h)
    return spectral_report(exact, tol=EXACT_NEUTRAL_TOL)


def _check_stability(scheme, params, h) -> Verdict:
    origin = _exact_or_fd(scheme, params, h, "origin")
    interior = _exact_or_fd(scheme, params, h, "interior")
    # origin: saddle expanding along the prey axis, contracting along the predator axis
    re = sorted((e.real for e in origin.eigenvalues), reverse=True)
    origin_ok = origin.regime == "real_split" and re[0] > 1.0 and abs(re[1]) < 1.0
    interior_ok = interior.regime == "neutral_rotation"
    ev = {"origin": origin, "interior": interior, "origin_ok": origin_ok, "interior_ok": interior_ok}
    return Verdict("stability", origin_ok and interior_ok, ev)


def _check_decoupled(scheme, params, h) -> Verdict:
    n = REPORT_DECOUPLED_STEPS
    errs = {}
    for name, s0, comp in (("prey_only", State(1.0, 0.0), "x"), ("predator_only", State(0.0, 1.0), "y")):
        traj = simulate(scheme, params, s0, h, n, record_v=False)
        worst = 0.0
        for k in range(len(traj)):
            try:
                exact = getattr(exact_decoupled(params, s0, h, k), comp)
            except OverflowError:
                break
            got = getattr(traj, comp)[k]
            other = traj.y[k] if comp == "x" else traj.x[k]
            err = abs(got - exact) / abs(exact) if exact != 0 else abs(got)
            worst = max(worst, err, abs(other))
        errs[name] = worst
    ok = all(e <= DECOUPLED_TOL for e in errs.values())
    return Verdict("decoupled", ok, {"max_relative_errors": errs, "steps": n})


def _check_oscillation(scheme, params, h) -> Verdict:
    m = discrete_jacobian(scheme, params, h)
    disc = m.trace ** 2 - 4 * m.determinant
    ev = {"map_trace": m.trace, "map_discriminant": disc}
    if scheme is SchemeKind.NSFD:
        rc = recurrence_coefficient(params, h)
        ev.update(K=rc.K, regime=rc.regime, linearized_coefficient=rc.linearized)
        return Verdict("oscillation", rc.regime == "oscillatory", ev)
    ev["regime"] = "oscillatory" if disc < 0 else "non_oscillatory"
    return Verdict("oscillation", disc < 0, ev)


def consistency_report(scheme, params: Params, h: float) -> ConsistencyReport:
    """Evaluate the five qualitative properties of the ODE for a scheme.

    Failures are recorded as verdicts, never raised.
    """
    scheme = scheme_kind(scheme)
    h = check_step(h)
    if not params.has_interior:
        raise NotFoundError("consistency report needs b > 0 and d > 0")
    checks = (_check_positivity, _check_fixed_points, _check_stability,
              _check_decoupled, _check_oscillation)
    return ConsistencyReport(scheme, params, h, [chk(scheme, params, h) for chk in checks])

"""Command-line front end.

Subcommands ``simulate``, ``analyze``, ``compare`` and ``convergence``.
Exit codes: 0 ok, 1 usage, 2 I/O, 3 truncated trajectory, 4 missing
interior fixed point, 5 convergence-order regression, 6 numeric failure.
Every error prints a single line ``lvnsfd: error[<code>]: <message>`` on
stderr.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import __version__
from .analysis import (
    consistency_report,
    convergence_order,
    discrete_jacobian,
    oscillation_period,
    recurrence_coefficient,
    spectral_report,
)
from .errors import DomainError, NotFoundError, NumericError, RegimeError
from .model import Params, State, classify_ode_fixed_point, fixed_points
from .schemes import SchemeKind, simulate
from .serialize import dumps, trajectory_csv, trajectory_rows

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_TRUNCATED = 3
EXIT_NO_INTERIOR = 4
EXIT_ORDER = 5
EXIT_NUMERIC = 6

ORDER_BAND = (0.5, 1.5)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, f"usage: {message} (see {self.prog} --help)")


@dataclass
class RunConfig:
    command: str
    a: float
    b: float
    c: float
    d: float
    h: float
    scheme: Optional[str] = None
    x0: Optional[float] = None
    y0: Optional[float] = None
    steps: Optional[int] = None
    T: Optional[float] = None
    levels: Optional[int] = None
    out: Optional[str] = None
    format: str = "json"
    with_v: bool = False

    @property
    def params(self) -> Params:
        return Params(self.a, self.b, self.c, self.d)

    def echo(self) -> dict:
        keys = ["scheme", "a", "b", "c", "d", "x0", "y0", "h", "steps", "T", "levels"]
        if self.command == "simulate":
            keys.append("with_v")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}

    def validate(self) -> None:
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise CliError(EXIT_USAGE, f"--{name} must be finite and >= 0")
        if not (math.isfinite(self.h) and self.h > 0):
            raise CliError(EXIT_USAGE, "--h must be finite and > 0")
        for name in ("x0", "y0"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise CliError(EXIT_USAGE, f"--{name} must be finite")
        if self.steps is not None and self.steps < 0:
            raise CliError(EXIT_USAGE, "--steps must be >= 0")
        if self.levels is not None and self.levels < 2:
            raise CliError(EXIT_USAGE, "--levels must be >= 2")
        if self.scheme == "nsfd" and self.command == "simulate" and (self.x0 < 0 or self.y0 < 0):
            raise CliError(EXIT_USAGE, "nsfd needs a non-negative initial state")
        if self.command == "convergence":
            if not (self.x0 > 0 and self.y0 > 0):
                raise CliError(EXIT_USAGE, "convergence needs --x0 > 0 and --y0 > 0")
            n = round(self.T / self.h)
            if not math.isfinite(self.T) or n < 1 or abs(n * self.h - self.T) > 1e-9 * max(1.0, self.T):
                raise CliError(EXIT_USAGE, "--T must be a positive integer multiple of --h")
        if self.command != "simulate" and self.format != "json":
            raise CliError(EXIT_USAGE, f"{self.command} only supports --format json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lvnsfd", description="NSFD integration of the Lotka-Volterra equations")
    parser.add_argument("--version", action="version", version=f"lvnsfd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scheme_choices=None, state=False):
        if scheme_choices:
            p.add_argument("--scheme", choices=scheme_choices, required=True)
        for name in ("a", "b", "c", "d"):
            p.add_argument(f"--{name}", type=float, required=True)
        if state:
            p.add_argument("--x0", type=float, required=True)
            p.add_argument("--y0", type=float, required=True)
        p.add_argument("--h", type=float, required=True, help="step size (h0 for convergence)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("simulate", help="iterate a scheme and write the trajectory")
    common(p, [s.value for s in SchemeKind], state=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--with-v", dest="with_v", action="store_true",
                   help="add the first-integral column V")

    p = sub.add_parser("analyze", help="fixed points, linearizations and periods")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("compare", help="consistency report for nsfd and euler")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("convergence", help="observed global order against RK4")
    common(p, ["nsfd", "euler"], state=True)
    p.add_argument("--T", type=float, required=True, help="horizon time")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


def _header(cfg: RunConfig) -> dict:
    return {"tool": "lvnsfd", "version": __version__, "command": cfg.command, "config": cfg.echo()}


def _map_payload(scheme, params, h, at) -> dict:
    m = discrete_jacobian(scheme, params, h, at=at)
    return {"jacobian": [list(r) for r in m.matrix], "closed_form": m.closed_form,
            "spectral": spectral_report(m)}


def run_simulate(cfg: RunConfig):
    traj = simulate(cfg.scheme, cfg.params, State(cfg.x0, cfg.y0), cfg.h, cfg.steps)
    if cfg.format == "csv":
        text = trajectory_csv(traj, cfg.with_v)
    else:
        doc = _header(cfg)
        doc["columns"] = ["k", "t", "x", "y"] + (["V"] if cfg.with_v else [])
        doc["rows"] = trajectory_rows(traj, cfg.with_v)
        doc["truncated_at"] = traj.truncated_at
        doc["truncation_reason"] = traj.truncation_reason
        text = dumps(doc)
    return text, EXIT_TRUNCATED if traj.truncated else EXIT_OK


def run_analyze(cfg: RunConfig):
    params = cfg.params
    if not params.has_interior:
        raise CliError(EXIT_NO_INTERIOR, "interior fixed point does not exist (b = 0 or d = 0)")
    doc = _header(cfg)
    doc["fixed_points"] = fixed_points(params)

    if params.a > 0 and params.c > 0:
        doc["ode_classification"] = {w: classify_ode_fixed_point(params, w) for w in ("origin", "interior")}
    else:
        doc["ode_classification"] = None

    doc["discrete_maps"] = {
        s: {at: _map_payload(s, params, cfg.h, at) for at in ("interior", "origin")}
        for s in ("nsfd", "euler")
    }
    rc = recurrence_coefficient(params, cfg.h)
    doc["recurrence"] = {"K": rc.K, "regime": rc.regime, "linearized_coefficient": rc.linearized,
                         "roots": list(rc.roots())}
    try:
        cont, disc = oscillation_period(params, cfg.h)
        doc["periods"] = {"continuous": cont, "discrete": disc, "note": None}
    except (RegimeError, DomainError) as exc:
        cont = 2 * math.pi / math.sqrt(params.a * params.c) if params.a * params.c > 0 else None
        doc["periods"] = {"continuous": cont, "discrete": None, "note": str(exc)}
    return dumps(doc), EXIT_OK


def _report_payload(rep) -> dict:
    return {
        "passed": rep.n_passed,
        "total": len(rep.verdicts),
        "verdicts": {v.name: {"passed": v.passed, "evidence": v.evidence} for v in rep.verdicts},
    }


def run_compare(cfg: RunConfig):
    params = cfg.params
    if not params.has_interior:
        raise CliError(EXIT_NO_INTERIOR, "interior fixed point does not exist (b = 0 or d = 0)")
    doc = _header(cfg)
    doc["reports"] = {s: _report_payload(consistency_report(s, params, cfg.h)) for s in ("nsfd", "euler")}
    return dumps(doc), EXIT_OK


def run_convergence(cfg: RunConfig):
    rep = convergence_order(cfg.scheme, cfg.params, State(cfg.x0, cfg.y0), cfg.T, cfg.h, cfg.levels)
    lo, hi = ORDER_BAND
    regression = any(not (lo <= p <= hi) for p in rep.orders)
    doc = _header(cfg)
    doc["report"] = {
        "h_values": rep.h_values,
        "errors": rep.errors,
        "orders": rep.orders,
        "h_ref": rep.h_ref,
        "degenerate": rep.degenerate,
        "order_band": list(ORDER_BAND),
        "regression": regression,
    }
    return dumps(doc), EXIT_ORDER if regression else EXIT_OK


COMMANDS = {
    "simulate": run_simulate,
    "analyze": run_analyze,
    "compare": run_compare,
    "convergence": run_convergence,
}


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from None


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = _config_from_args(ns)
        cfg.validate()
        try:
            text, code = COMMANDS[cfg.command](cfg)
        except NotFoundError as exc:
            raise CliError(EXIT_NO_INTERIOR, str(exc)) from None
        except DomainError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        except (NumericError, OverflowError) as exc:
            raise CliError(EXIT_NUMERIC, str(exc)) from None
        _emit(text, cfg.out)
        if code == EXIT_TRUNCATED:
            print(f"lvnsfd: warning[{code}]: trajectory truncated", file=sys.stderr)
        elif code == EXIT_ORDER:
            print(f"lvnsfd: error[{code}]: observed order outside {list(ORDER_BAND)}", file=sys.stderr)
        return code
    except CliError as exc:
        msg = " ".join(str(exc).split())
        print(f"lvnsfd: error[{exc.code}]: {msg}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

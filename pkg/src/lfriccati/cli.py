"""Command-line front end.

Examples::

    lfriccati --preset fig1 --out fig1.csv
    lfriccati --preset fig1 --mode verify --zeta 1
    lfriccati --w0 1 --w1 0 --w2 1 --phi0 0 --zeta 0.5 --mode solve
    lfriccati --job job.json

Exit status: 0 on success, 2 for invalid input, 3 when a numerical guard
refuses to produce a value.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from typing import TextIO

from .core_numerics import CANTOR_ZETA
from .errors import NumericalGuardError
from .fractal_series import DEFAULT_TERMS
from .report import dumps, emit_csv, emit_report, sample_grid, sample_rows
from .riccati_solver import (
    RiccatiProblem,
    compare_semantics,
    find_pole,
    ic_map,
    reduce_to_linear,
    solve_constant,
)

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
MODES = ("solve", "sample", "verify", "reduce")

PRESETS = {
    "fig1": {
        "zeta": CANTOR_ZETA,
        "w0": 1.0,
        "w1": 3.0,
        "w2": 1.0,
        "phi0": 1.0,
        "mu_max": 0.5,
        "grid_points": 256,
        "mode": "sample",
    },
}

DEFAULTS = {
    "zeta": 1.0,
    "w0": 1.0,
    "w1": 0.0,
    "w2": 1.0,
    "phi0": 0.0,
    "mu_max": 1.0,
    "grid_points": 256,
    "terms": DEFAULT_TERMS,
    "mode": "solve",
}


@dataclass(frozen=True)
class JobSpec:
    zeta: float
    w0: float
    w1: float
    w2: float
    phi0: float
    mu_max: float
    grid_points: int
    terms: int
    mode: str

    def __post_init__(self):
        for name in ("zeta", "w0", "w1", "w2", "phi0", "mu_max"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
        for name in ("grid_points", "terms"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValueError(f"{name} must be an integer, got {v!r}")
        if not 0 < self.zeta <= 1:
            raise ValueError("zeta must satisfy 0 < zeta <= 1")
        if self.w0 == 0 or self.w2 == 0:
            raise ValueError("w0 and w2 must be nonzero")
        if not self.mu_max > 0:
            raise ValueError("mu_max must be positive")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.terms < 8:
            raise ValueError("terms must be >= 8")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @property
    def problem(self) -> RiccatiProblem:
        return RiccatiProblem(self.zeta, self.w0, self.w1, self.w2, self.phi0)

    @classmethod
    def resolve(cls, flags: dict, job: dict | None = None) -> JobSpec:
        """Merge defaults < preset < command-line flags < job file."""
        job = dict(job or {})
        fields = {f.name for f in dataclasses.fields(cls)}
        unknown = set(job) - fields - {"preset"}
        if unknown:
            raise ValueError(f"unknown job keys: {sorted(unknown)}")
        preset_name = job.pop("preset", None) or flags.get("preset")
        merged = dict(DEFAULTS)
        if preset_name is not None:
            if preset_name not in PRESETS:
                raise ValueError(f"unknown preset {preset_name!r}")
            merged.update(PRESETS[preset_name])
        merged.update({k: v for k, v in flags.items() if k in fields and v is not None})
        merged.update(job)
        return cls(**merged)


def _complex_list(values):
    return [complex(v) for v in values]


def _solve_description(spec: JobSpec) -> dict:
    sol = solve_constant(spec.problem)
    return {
        "zeta": spec.zeta,
        "branch": sol.branch,
        "sigma": sol.sigma,
        "poles": _complex_list(sol.poles),
        "residues": _complex_list(sol.residues),
        "psi_terms": [
            {"coefficient": t.coefficient, "rate": t.rate, "order": t.order}
            for t in sol.psi.terms
        ],
        "dpsi_terms": [
            {"coefficient": t.coefficient, "rate": t.rate, "order": t.order}
            for t in sol.dpsi.terms
        ],
        "blow_up": find_pole(sol, spec.mu_max),
    }


def _reduce_description(spec: JobSpec) -> dict:
    p = spec.problem
    ode = reduce_to_linear(p)
    ic = ic_map(p)
    return {
        "zeta": spec.zeta,
        "omega1": ode.omega1,
        "omega2": ode.omega2,
        "alpha": ic.alpha,
        "beta": ic.beta,
    }


def run_job(spec: JobSpec, stderr: TextIO | None = None) -> tuple[int, str]:
    """Execute a job; returns (exit status, output text)."""
    stderr = stderr or sys.stderr
    try:
        if spec.mode == "solve":
            return EXIT_OK, dumps(_solve_description(spec))
        if spec.mode == "reduce":
            return EXIT_OK, dumps(_reduce_description(spec))
        if spec.mode == "sample":
            sol = solve_constant(spec.problem)
            rows, pole = sample_rows(sol, spec.mu_max, spec.grid_points)
            if pole is not None:
                print(
                    f"warning: solution has a pole at mu={pole:.12g}; "
                    "later rows flagged after_pole",
                    file=stderr,
                )
            return EXIT_OK, emit_csv(rows)
        grid = sample_grid(spec.mu_max, spec.grid_points)
        report = compare_semantics(spec.problem, spec.terms, grid)
        return EXIT_OK, emit_report(report)
    except NumericalGuardError as exc:
        print(f"error: numerical guard: {exc}", file=stderr)
        return EXIT_NUMERIC, ""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfriccati",
        description="Solve constant-coefficient local fractional Riccati equations.",
    )
    parser.add_argument("--zeta", type=float, help="fractal order, 0 < zeta <= 1")
    parser.add_argument("--w0", type=float, help="constant term coefficient")
    parser.add_argument("--w1", type=float, help="linear term coefficient")
    parser.add_argument("--w2", type=float, help="quadratic term coefficient")
    parser.add_argument("--phi0", type=float, help="initial value Phi(0)")
    parser.add_argument("--mu-max", dest="mu_max", type=float, help="end of sample range")
    parser.add_argument("--grid", dest="grid_points", type=int, help="number of sample points")
    parser.add_argument("--terms", type=int, help="series truncation order")
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument("--job", help="JSON job file; its keys override flags")
    parser.add_argument("--out", help="write output here instead of stdout")
    return parser


def main(argv: list[str] | None = None, stdout: TextIO | None = None,
         stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        job = None
        if args.job:
            with open(args.job, encoding="utf-8") as fh:
                job = json.load(fh)
            if not isinstance(job, dict):
                raise ValueError("job file must hold a JSON object")
        spec = JobSpec.resolve(vars(args), job)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: invalid job: {exc}", file=stderr)
        return EXIT_INVALID

    status, text = run_job(spec, stderr)
    if status != EXIT_OK:
        return status
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Serialization of sampled solutions (CSV) and discrepancy reports (JSON)."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .riccati_solver import ClosedFormSolution, DiscrepancyReport, find_pole

CSV_HEADER = "mu,phi,psi,dpsi_zeta,flag"
FLAGS = ("ok", "after_pole")


@dataclass(frozen=True)
class SampleRow:
    mu: float
    phi: float
    psi: float
    dpsi_zeta: float
    flag: str = "ok"

    def __post_init__(self):
        if self.flag not in FLAGS:
            raise ValueError(f"flag must be one of {FLAGS}, got {self.flag!r}")
        if self.flag == "ok" and not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite on an ok row (mu={self.mu})")


def sample_grid(mu_max: float, points: int) -> np.ndarray:
    """k * mu_max / (points - 1), k = 0..points-1."""
    return np.array([k * mu_max / (points - 1) for k in range(points)])


def sample_rows(
    sol: ClosedFormSolution, mu_max: float, points: int
) -> tuple[list[SampleRow], float | None]:
    """Sample the closed form on a uniform grid, flagging rows past the first pole."""
    pole = find_pole(sol, mu_max)
    rows = []
    for mu in sample_grid(mu_max, points):
        phi, psi, dpsi = sol.sample(float(mu))
        flag = "after_pole" if pole is not None and mu >= pole else "ok"
        rows.append(SampleRow(float(mu), phi, psi, dpsi, flag))
    return rows, pole


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_csv(rows: Iterable[SampleRow]) -> str:
    """CSV text with LF line endings and round-trip float precision."""
    lines = [CSV_HEADER]
    prev = -math.inf
    for r in rows:
        if not r.mu > prev:
            raise ValueError("rows must have strictly increasing mu")
        prev = r.mu
        lines.append(",".join((_fmt(r.mu), _fmt(r.phi), _fmt(r.psi), _fmt(r.dpsi_zeta), r.flag)))
    return "\n".join(lines) + "\n"


def jsonable(obj):
    """Recursively convert to JSON-safe values; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        if z.imag == 0:
            return jsonable(z.real)
        return {"re": jsonable(z.real), "im": jsonable(z.imag)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def emit_report(r: DiscrepancyReport) -> str:
    """JSON text of a discrepancy report, keys in a fixed order."""
    return dumps(dataclasses.asdict(r))


def rows_from_csv(text: str) -> list[SampleRow]:
    """Parse text produced by :func:`emit_csv`."""
    lines = text.rstrip("\n").split("\n")
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for line in lines[1:]:
        mu, phi, psi, dpsi, flag = line.split(",")
        out.append(SampleRow(float(mu), float(phi), float(psi), float(dpsi), flag))
    return out


def identity_defect(rows: Sequence[SampleRow], w2: float) -> float:
    """max |phi + dpsi / (w2 psi)| over ok rows."""
    worst = 0.0
    for r in rows:
        if r.flag == "ok":
            worst = max(worst, abs(r.phi + r.dpsi_zeta / (w2 * r.psi)))
    return worst

"""Local fractional Riccati equations D^z Phi = w0 + w1 Phi + w2 Phi**2.

Two independent routes are provided:

* the linearising pipeline: chi = w2 Phi and chi = -D psi / psi turn the
  equation into D^{2z} psi - Omega2 D^z psi + Omega1 psi = 0, which for
  constant coefficients is solved in closed form through the Laplace engine;
* a direct series recursion for Phi, which is the authoritative solution
  under the operational (index-shift) semantics of D^z.

At zeta = 1 both routes agree.  For zeta < 1 they differ, because the product
and quotient rules used by the reduction do not hold for the index-shift
derivative; :func:`compare_semantics` measures that gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from . import published
from .core_numerics import FractalOrder, gamma_ladder, ml_dlambda_eval, ml_eval
from .errors import ConsistencyError, PoleError
from .fractal_series import (
    DEFAULT_TERMS,
    FractalSeries,
    fs_div,
    fs_eval_remainder,
    fs_lfd,
    fs_mul,
)
from .laplace_engine import (
    ExpSum,
    PartialFractions,
    decompose,
    expsum_eval,
    expsum_to_series,
    invert,
    lflt_ivp,
)

Coefficient = Union[float, FractalSeries]

IC_TOL = 1e-12
POLE_SCAN_POINTS = 512
POLE_XTOL = 1e-12
#: Oracle series points are compared only where the tail is this small.
ORACLE_TAIL_TOL = 1e-12
ORACLE_EVAL_TERMS = 512
SAMPLE_MU = 0.25


def _const0(w: Coefficient) -> complex:
    return complex(w.scaled[0]) if isinstance(w, FractalSeries) else complex(w)


def _as_series(w: Coefficient, zeta: float, N: int) -> FractalSeries:
    if isinstance(w, FractalSeries):
        return w
    return FractalSeries.constant(zeta, w, N)


@dataclass(frozen=True)
class RiccatiProblem:
    zeta: float
    w0: Coefficient
    w1: Coefficient
    w2: Coefficient
    phi0: float

    def __post_init__(self):
        object.__setattr__(self, "zeta", float(FractalOrder(self.zeta)))
        for name in ("w0", "w1", "w2"):
            w = getattr(self, name)
            if isinstance(w, FractalSeries):
                if w.zeta != self.zeta:
                    raise ValueError(f"{name} has order {w.zeta}, problem has {self.zeta}")
            else:
                w = float(w)
                if not math.isfinite(w):
                    raise ValueError(f"{name} must be finite")
                object.__setattr__(self, name, w)
        if _const0(self.w0) == 0:
            raise ValueError("w0 must be nonzero")
        if _const0(self.w2) == 0:
            raise ValueError("w2 must be nonzero")
        if not math.isfinite(self.phi0):
            raise ValueError("phi0 must be finite")

    @property
    def is_constant(self) -> bool:
        return not any(isinstance(w, FractalSeries) for w in (self.w0, self.w1, self.w2))

    @property
    def sigma(self) -> float:
        if not self.is_constant:
            raise ValueError("discriminant is defined for constant coefficients only")
        return self.w1**2 - 4.0 * self.w2 * self.w0


@dataclass(frozen=True)
class LinearODE:
    """D^{2z} psi - omega2 D^z psi + omega1 psi = 0."""

    zeta: float
    omega1: Coefficient
    omega2: Coefficient

    @property
    def is_constant(self) -> bool:
        return not isinstance(self.omega1, FractalSeries) and not isinstance(
            self.omega2, FractalSeries
        )


@dataclass(frozen=True)
class InitialData:
    """alpha = D^z psi(0), beta = psi(0)."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if self.beta == 0:
            raise ValueError("beta = psi(0) must be nonzero")


@dataclass(frozen=True)
class ClosedFormSolution:
    zeta: float
    psi: ExpSum
    dpsi: ExpSum
    w2: float
    branch: str
    sigma: float
    partial_fractions: PartialFractions

    @property
    def poles(self) -> list[complex]:
        return [t.pole for t in self.partial_fractions.terms]

    @property
    def residues(self) -> list[complex]:
        return [t.residue for t in self.partial_fractions.terms]

    def phi(self, mu: float) -> float:
        p = expsum_eval(self.psi, mu)
        if p == 0:
            raise PoleError(f"psi vanishes at mu={mu}")
        return -expsum_eval(self.dpsi, mu) / (self.w2 * p)

    def sample(self, mu: float) -> tuple[float, float, float]:
        """(phi, psi, D^z psi) at ``mu``; phi is nan exactly at a zero of psi."""
        p = expsum_eval(self.psi, mu)
        dp = expsum_eval(self.dpsi, mu)
        phi = -dp / (self.w2 * p) if p != 0 else math.nan
        return phi, p, dp


def reduce_to_linear(p: RiccatiProblem, N: int = DEFAULT_TERMS) -> LinearODE:
    """Omega1 = w2 w0 and Omega2 = w1 + D^z w2 / w2."""
    if p.is_constant:
        return LinearODE(p.zeta, p.w2 * p.w0, p.w1)
    w0, w1, w2 = (_as_series(w, p.zeta, N) for w in (p.w0, p.w1, p.w2))
    omega1 = fs_mul(w2, w0)
    if isinstance(p.w2, FractalSeries):
        omega2 = w1 + fs_div(fs_lfd(w2), w2)
    else:
        omega2 = w1
    return LinearODE(p.zeta, omega1, omega2)


def ic_map(p: RiccatiProblem) -> InitialData:
    """Gauge psi(0) = 1, so D^z psi(0) = -w2(0) phi0."""
    return InitialData(alpha=-(_const0(p.w2).real) * p.phi0, beta=1.0)


def solve_constant(p: RiccatiProblem) -> ClosedFormSolution:
    """Closed-form solution through the Laplace engine (constant coefficients)."""
    if not p.is_constant:
        raise ValueError("closed forms exist only for constant coefficients")
    ode = reduce_to_linear(p)
    ic = ic_map(p)
    pf = decompose(lflt_ivp(ode.omega2, ode.omega1, ic.alpha, ic.beta))
    psi = invert(pf, p.zeta)
    sol = ClosedFormSolution(p.zeta, psi, psi.derivative(), p.w2, pf.branch, p.sigma, pf)
    phi_at_0 = sol.phi(0.0)
    if abs(phi_at_0 - p.phi0) > IC_TOL * max(1.0, abs(p.phi0)):
        raise ConsistencyError(f"closed form gives Phi(0)={phi_at_0}, expected {p.phi0}")
    return sol


def solve_linear_series(ode: LinearODE, ic: InitialData, N: int = DEFAULT_TERMS) -> FractalSeries:
    """Series solution of the linear equation from (alpha, beta)."""
    if ode.is_constant:
        c = np.zeros(N + 1)
        c[0] = ic.beta
        if N >= 1:
            c[1] = ic.alpha
        for k in range(N - 1):
            c[k + 2] = ode.omega2 * c[k + 1] - ode.omega1 * c[k]
        return FractalSeries.from_coeffs(ode.zeta, c)

    zeta = ode.zeta
    om1 = _as_series(ode.omega1, zeta, N)
    om2 = _as_series(ode.omega2, zeta, N)
    N = min(N, om1.N + 2, om2.N + 2)
    ladder = gamma_ladder(zeta, N)
    a = np.zeros(N + 1, dtype=complex)
    da = np.zeros(N, dtype=complex)  # scaled coefficients of D^z psi
    a[0] = ic.beta
    a[1] = ic.alpha * ladder.ratio(0)
    da[0] = ic.alpha
    for n in range(N - 1):
        rhs = np.dot(om2.scaled[: n + 1], da[n::-1]) - np.dot(om1.scaled[: n + 1], a[n::-1])
        da[n + 1] = rhs * ladder.ratio(n)
        a[n + 2] = da[n + 1] * ladder.ratio(n + 1)
    return FractalSeries(zeta, a)


def solve_series(p: RiccatiProblem, N: int = DEFAULT_TERMS) -> FractalSeries:
    """Formal series solution of the Riccati equation by direct recursion.

    Coefficient n of the right-hand side only involves phi_0..phi_n, so the
    recursion phi_{n+1} = [w0 + w1 Phi + w2 Phi**2]_n is explicit.
    """
    zeta = p.zeta
    w0, w1, w2 = (_as_series(w, zeta, N) for w in (p.w0, p.w1, p.w2))
    N = min(N, w0.N + 1, w1.N + 1, w2.N + 1)
    ladder = gamma_ladder(zeta, max(N, 1))
    a = np.zeros(N + 1, dtype=complex)
    sq = np.zeros(N + 1, dtype=complex)
    a[0] = p.phi0
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(N):
            sq[n] = np.dot(a[: n + 1], a[n::-1])
            rhs = (
                w0.scaled[n]
                + np.dot(w1.scaled[: n + 1], a[n::-1])
                + np.dot(w2.scaled[: n + 1], sq[n::-1])
            )
            a[n + 1] = rhs * ladder.ratio(n)
    return FractalSeries(zeta, a)


def residual(p: RiccatiProblem, phi: FractalSeries) -> FractalSeries:
    """Defect D^z Phi - w0 - w1 Phi - w2 Phi**2, valid to order N - 1."""
    N = phi.N
    w0, w1, w2 = (_as_series(w, p.zeta, N) for w in (p.w0, p.w1, p.w2))
    return fs_lfd(phi) - w0 - w1 * phi - w2 * (phi * phi)


def residual_norm(p: RiccatiProblem, phi: FractalSeries, kmax: int | None = None) -> float:
    """max_k |r_k| / max(1, |c_{k+1}(phi)|) over the valid orders."""
    r = residual(p, phi).coeffs
    d = phi.coeffs[1:]
    if kmax is not None:
        r, d = r[: kmax + 1], d[: kmax + 1]
    return float(np.max(np.abs(r) / np.maximum(1.0, np.abs(d))))


def recover_phi(psi: FractalSeries, w2: Coefficient) -> FractalSeries:
    """Phi = -D^z psi / (w2 psi)."""
    if abs(psi.scaled[0]) == 0:
        raise PoleError("psi(0) = 0: solution has a pole at the origin")
    denom = w2 * psi if isinstance(w2, FractalSeries) else psi * float(w2)
    return -fs_div(fs_lfd(psi), denom)


def find_pole(
    sol: ClosedFormSolution, mu_max: float, scan_points: int = POLE_SCAN_POINTS
) -> float | None:
    """Smallest zero of psi in [0, mu_max] with a sign change, or None."""
    if not mu_max > 0:
        raise ValueError("mu_max must be positive")
    grid = np.linspace(0.0, mu_max, scan_points + 1)
    prev = expsum_eval(sol.psi, 0.0)
    for lo, hi in zip(grid[:-1], grid[1:]):
        cur = expsum_eval(sol.psi, float(hi))
        if cur == 0.0:
            return float(hi)
        if (prev < 0) != (cur < 0):
            return float(
                brentq(lambda m: expsum_eval(sol.psi, m), lo, hi, xtol=POLE_XTOL)
            )
        prev = cur
    return None


@dataclass
class DiscrepancyReport:
    """Gaps between the closed-form pipeline, the series oracle and the printed forms."""

    zeta: float
    problem: dict
    sigma: float
    branch: str
    poles: list
    residues: list
    grid: dict
    sup_difference: float | None
    coefficient_gap: float
    linear_equivalence_gap: float
    residual_norm_closed_form: float
    residual_norm_oracle: float
    leibniz_defect_ratio: float
    double_root_basis_gap: float
    blow_up: float | None
    paper_constants: dict = field(default_factory=dict)
    boundary_value_printed_formula: float = math.nan
    boundary_value_required: float = published.EXAMPLE_PHI0
    boundary_value_mismatch: bool = True
    fractal_imaginary: dict = field(default_factory=dict)


def _close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _entry(printed, computed, tol: float = 1e-12) -> dict:
    return {"printed": printed, "computed": computed, "match": _close(printed, computed, tol)}


def published_constants() -> dict:
    """Printed versus computed constants of the reference worked example."""
    w0, w1, w2 = published.EXAMPLE_COEFFS
    q = w2 * w0
    ic = ic_map(RiccatiProblem(1.0, w0, w1, w2, published.EXAMPLE_PHI0))
    pf = decompose(lflt_ivp(w1, q, ic.alpha, ic.beta))
    plus, minus = (t.pole.real for t in pf.terms)
    # printed general residue formulas evaluated with beta = -alpha, alpha = 1
    from_formula = published.printed_residues(w1, q, 1.0, -1.0)
    printed_num = published.printed_transform_numerator(w1, ic.alpha, ic.beta)
    return {
        "discriminant": _entry(published.PRINTED_DISCRIMINANT, pf.sigma),
        "pole_plus": _entry(published.PRINTED_POLE_PLUS, plus),
        "pole_minus": _entry(published.PRINTED_POLE_MINUS, minus),
        "residue_plus_per_alpha": _entry(
            published.PRINTED_RESIDUE_PLUS_PER_ALPHA, from_formula[0]
        ),
        "residue_minus_per_alpha": _entry(
            published.PRINTED_RESIDUE_MINUS_PER_ALPHA, from_formula[1]
        ),
        "corrected_residues": [t.residue.real for t in pf.terms],
        "exponent_sign": {"printed": -1, "computed": 1, "match": False},
        "transform_numerator": {
            "printed": list(printed_num),
            "computed": [c.real for c in lflt_ivp(w1, q, ic.alpha, ic.beta).num],
            "psi0_from_printed": printed_num[-1],
            "psi0_required": ic.beta,
            "match": _close(printed_num[-1], ic.beta),
        },
    }


def fractal_imaginary_comparison(p: RiccatiProblem, mu: float = SAMPLE_MU) -> dict:
    """Complex-pair branch under two readings of the imaginary unit.

    Plain ``i`` versus ``exp(i pi zeta / 2)`` inserted where the conjugate
    poles are split.  Uses ``p`` if it is in the complex-pair branch,
    otherwise the companion problem w = (1, 0, 1), phi0 = 0.
    """
    if not (p.is_constant and p.sigma < 0):
        p = RiccatiProblem(p.zeta, 1.0, 0.0, 1.0, 0.0)
    ic = ic_map(p)
    w1, s = p.w1, math.sqrt(-p.sigma)
    out = {
        "problem": {"w0": p.w0, "w1": p.w1, "w2": p.w2, "phi0": p.phi0},
        "mu": mu,
    }
    for key, unit in (("plain_i", 1j), ("exp_i_pi_zeta_half", np.exp(0.5j * math.pi * p.zeta))):
        shift = (ic.alpha - ic.beta * w1 / 2.0) / (unit * s)
        res = (ic.beta / 2.0 + shift, ic.beta / 2.0 - shift)
        rates = ((w1 + unit * s) / 2.0, (w1 - unit * s) / 2.0)
        psi = sum(r * ml_eval(p.zeta, lam, mu) for r, lam in zip(res, rates))
        dpsi = sum(r * lam * ml_eval(p.zeta, lam, mu) for r, lam in zip(res, rates))
        phi = -dpsi / (p.w2 * psi)
        out[key] = {"phi_re": float(phi.real), "phi_im": float(phi.imag)}
    return out


def compare_semantics(
    p: RiccatiProblem,
    N: int = DEFAULT_TERMS,
    grid: Sequence[float] | None = None,
    eval_terms: int = ORACLE_EVAL_TERMS,
) -> DiscrepancyReport:
    """Quantify how far the closed-form pipeline is from the series oracle.

    Pointwise comparison uses an ``eval_terms``-order oracle and skips grid
    points where its tail estimate exceeds ``ORACLE_TAIL_TOL`` (beyond the
    radius of convergence); ``grid['points_compared']`` records how many
    points survived.
    """
    if not p.is_constant:
        raise ValueError("compare_semantics needs constant coefficients")
    grid = np.linspace(0.0, 0.4, 101) if grid is None else np.asarray(grid, dtype=float)
    zeta = p.zeta
    sol = solve_constant(p)

    oracle_long = solve_series(p, max(N, eval_terms))
    oracle = oracle_long.truncate(N)
    finite = np.isfinite(oracle_long.scaled)
    if not finite.all():
        # coefficients past the double range carry no information
        oracle_long = oracle_long.truncate(max(int(np.argmin(finite)) - 1, N))
    psi_series = expsum_to_series(sol.psi, N)
    phi_closed = recover_phi(psi_series, p.w2)

    kmax = min(phi_closed.N, 48)
    c_closed = phi_closed.coeffs[: kmax + 1]
    c_oracle = oracle.coeffs[: kmax + 1]
    coefficient_gap = float(
        np.max(np.abs(c_closed - c_oracle) / np.maximum(1.0, np.abs(c_oracle)))
    )
    lin = solve_linear_series(reduce_to_linear(p), ic_map(p), N).coeffs[: kmax + 1]
    linear_gap = float(
        np.max(np.abs(psi_series.coeffs[: kmax + 1] - lin) / np.maximum(1.0, np.abs(lin)))
    )

    sup = None
    compared = 0
    for mu in grid:
        value, tail = fs_eval_remainder(oracle_long, float(mu))
        if not (np.isfinite(value) and tail <= ORACLE_TAIL_TOL * max(1.0, abs(value))):
            continue
        phi, psi, _ = sol.sample(float(mu))
        if not math.isfinite(phi):
            continue
        diff = abs(phi - value.real)
        sup = diff if sup is None else max(sup, diff)
        compared += 1

    e1 = FractalSeries.basis(zeta, 1, 4)
    d1 = fs_lfd(e1)
    lhs = fs_lfd(e1 * e1).coeffs[1]
    rhs = (d1 * e1.truncate(3) + e1.truncate(3) * d1).coeffs[1]
    leibniz = float((lhs / rhs).real)

    lam = (p.w1 / 2.0) if p.is_constant else 0.0
    g1 = gamma_ladder(zeta, 1).values[1]
    product_form = SAMPLE_MU**zeta / g1 * ml_eval(zeta, lam, SAMPLE_MU)
    basis_gap = float(abs(product_form - ml_dlambda_eval(zeta, lam, SAMPLE_MU)))

    boundary = published.printed_example_phi(0.0, zeta)

    def _num(z: complex):
        z = complex(z)
        return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}

    return DiscrepancyReport(
        zeta=zeta,
        problem={"w0": p.w0, "w1": p.w1, "w2": p.w2, "phi0": p.phi0},
        sigma=sol.sigma,
        branch=sol.branch,
        poles=[_num(z) for z in sol.poles],
        residues=[_num(z) for z in sol.residues],
        grid={
            "start": float(grid[0]) if len(grid) else 0.0,
            "stop": float(grid[-1]) if len(grid) else 0.0,
            "points": int(len(grid)),
            "points_compared": compared,
            "oracle_terms": oracle_long.N,
        },
        sup_difference=sup,
        coefficient_gap=coefficient_gap,
        linear_equivalence_gap=linear_gap,
        residual_norm_closed_form=residual_norm(p, phi_closed, kmax - 1),
        residual_norm_oracle=residual_norm(p, oracle),
        leibniz_defect_ratio=leibniz,
        double_root_basis_gap=basis_gap,
        blow_up=find_pole(sol, float(grid[-1])) if len(grid) and grid[-1] > 0 else None,
        paper_constants=published_constants(),
        boundary_value_printed_formula=boundary,
        boundary_value_required=published.EXAMPLE_PHI0,
        boundary_value_mismatch=not _close(boundary, published.EXAMPLE_PHI0, 1e-9),
        fractal_imaginary=fractal_imaginary_comparison(p),
    )

"""Laplace-domain solution of D^{2z} psi - w1 D^z psi + q psi = 0.

Working in the variable z = s**zeta the transform of the initial value
problem is a proper rational function with a monic quadratic denominator.
Its partial fractions invert term by term through the table

    A / (z - lam)     <->  A E_zeta(lam mu**zeta)
    A / (z - lam)**2  <->  A d/dlam E_zeta(lam mu**zeta)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core_numerics import FractalOrder, ml_dlambda_eval, ml_eval
from .errors import ConsistencyError
from .fractal_series import DEFAULT_TERMS, FractalSeries

__all__ = [
    "DOUBLE_ROOT_TOL",
    "RationalZ",
    "PoleTerm",
    "PartialFractions",
    "ExpTerm",
    "ExpSum",
    "lflt_ivp",
    "decompose",
    "invert",
    "expsum_to_series",
    "expsum_eval",
]

#: |Sigma| <= DOUBLE_ROOT_TOL * max(1, w1**2) is treated as a double root.
DOUBLE_ROOT_TOL = 1e-9

REALNESS_TOL = 1e-12


@dataclass(frozen=True)
class RationalZ:
    """num(z) / den(z), coefficients in ascending powers of z."""

    num: tuple[complex, ...]
    den: tuple[complex, ...]

    def __post_init__(self):
        num = tuple(complex(c) for c in self.num)
        den = tuple(complex(c) for c in self.den)
        if not den or den[-1] != 1:
            raise ValueError("denominator must be monic")
        if len(num) >= len(den):
            raise ValueError("numerator degree must be below denominator degree")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.num + self.den)

    def __call__(self, z: complex) -> complex:
        return np.polyval(self.num[::-1], z) / np.polyval(self.den[::-1], z)


@dataclass(frozen=True)
class PoleTerm:
    residue: complex
    pole: complex
    multiplicity: int = 1


@dataclass(frozen=True)
class PartialFractions:
    terms: tuple[PoleTerm, ...]
    sigma: float = math.nan
    branch: str = ""
    real_input: bool = True

    def to_rational(self) -> RationalZ:
        """Recombine the terms over their common denominator."""
        mult: dict[complex, int] = {}
        for t in self.terms:
            mult[t.pole] = max(mult.get(t.pole, 0), t.multiplicity)
        den = np.poly([p for p, m in mult.items() for _ in range(m)]).astype(complex)
        num = np.zeros(1, dtype=complex)
        for t in self.terms:
            part, _ = np.polydiv(den, np.poly([t.pole] * t.multiplicity))
            num = np.polyadd(num, t.residue * part)
        num = np.atleast_1d(num)[-(len(den) - 1) :]
        return RationalZ(tuple(num[::-1]), tuple(den[::-1]))


def lflt_ivp(w1: float, q: float, alpha: float, beta: float) -> RationalZ:
    """Transform of psi with D^z psi(0) = alpha, psi(0) = beta.

    Uses L{D^z psi} = z Psi - beta and L{D^{2z} psi} = z^2 Psi - z beta - alpha,
    giving Psi = (beta z + alpha - w1 beta) / (z^2 - w1 z + q).
    """
    return RationalZ((alpha - w1 * beta, beta), (q, -w1, 1.0))


def _classify(sigma: float, w1: complex) -> str:
    if abs(sigma) <= DOUBLE_ROOT_TOL * max(1.0, abs(w1) ** 2):
        return "double"
    return "distinct-real" if sigma > 0 else "complex-pair"


def decompose(r: RationalZ, tol: float = DOUBLE_ROOT_TOL) -> PartialFractions:
    """Partial fractions of a proper rational function with quadratic denominator."""
    if len(r.den) != 3:
        raise ValueError("decompose handles quadratic denominators only")
    q, b, _ = r.den
    w1 = -b
    num = r.num + (0j,) * (2 - len(r.num))
    c0, c1 = num
    real = r.is_real
    sigma_c = w1 * w1 - 4.0 * q
    sigma = sigma_c.real
    if abs(sigma_c) <= tol * max(1.0, abs(w1) ** 2):
        lam = w1 / 2.0
        terms = []
        if c1 != 0:
            terms.append(PoleTerm(c1, lam, 1))
        terms.append(PoleTerm(c1 * lam + c0, lam, 2))
        return PartialFractions(tuple(terms), sigma, "double", real)
    root = cmath.sqrt(sigma_c)
    if real and sigma > 0:
        root = complex(math.sqrt(sigma))
    plus, minus = (w1 + root) / 2.0, (w1 - root) / 2.0
    res_plus = (c1 * plus + c0) / (plus - minus)
    res_minus = (c1 * minus + c0) / (minus - plus)
    if real and sigma < 0:
        # exact conjugate symmetry for real input
        plus = complex(w1.real / 2.0, math.sqrt(-sigma) / 2.0)
        minus = plus.conjugate()
        res_plus = (c1 * plus + c0) / (plus - minus)
        res_minus = res_plus.conjugate()
    branch = _classify(sigma, w1) if real else ("distinct" if sigma_c != 0 else "double")
    return PartialFractions(
        (PoleTerm(res_plus, plus, 1), PoleTerm(res_minus, minus, 1)), sigma, branch, real
    )


@dataclass(frozen=True)
class ExpTerm:
    """coefficient * (d/dlam)**order E_zeta(rate mu**zeta)."""

    coefficient: complex
    rate: complex
    order: int = 0


@dataclass(frozen=True)
class ExpSum:
    zeta: float
    terms: tuple[ExpTerm, ...]
    real: bool = True

    def __post_init__(self):
        object.__setattr__(self, "zeta", float(FractalOrder(self.zeta)))
        if any(t.order not in (0, 1) for t in self.terms):
            raise ValueError("ExpSum supports derivative orders 0 and 1 only")

    def derivative(self) -> ExpSum:
        """D^zeta applied term by term.

        A E(lam) -> A lam E(lam);  A dE(lam) -> A E(lam) + A lam dE(lam).
        """
        out = []
        for t in self.terms:
            if t.order == 0:
                out.append(ExpTerm(t.coefficient * t.rate, t.rate, 0))
            else:
                out.append(ExpTerm(t.coefficient, t.rate, 0))
                out.append(ExpTerm(t.coefficient * t.rate, t.rate, 1))
        return ExpSum(self.zeta, tuple(out), self.real)

    def __call__(self, mu: float) -> float | complex:
        return expsum_eval(self, mu)


def invert(pf: PartialFractions, zeta: float) -> ExpSum:
    """Inverse transform of partial fractions into Mittag-Leffler terms."""
    terms = tuple(
        ExpTerm(t.residue, t.pole, t.multiplicity - 1) for t in pf.terms if t.residue != 0
    )
    return ExpSum(zeta, terms, pf.real_input)


def expsum_to_series(e: ExpSum, N: int = DEFAULT_TERMS) -> FractalSeries:
    """Fractal-basis coefficients: A lam**k (order 0) and A k lam**(k-1) (order 1)."""
    c = np.zeros(N + 1, dtype=complex)
    scale = np.zeros(N + 1)
    k = np.arange(N + 1)
    for t in e.terms:
        powers = np.ones(N + 1, dtype=complex)
        for j in range(1, N + 1):
            powers[j] = powers[j - 1] * t.rate
        if t.order == 0:
            part = t.coefficient * powers
        else:
            part = t.coefficient * k * np.concatenate(([0j], powers[:-1]))
        c += part
        scale += np.abs(part)
    if e.real:
        bad = np.abs(c.imag) > REALNESS_TOL * np.maximum(1.0, scale)
        if np.any(bad):
            raise ConsistencyError("real ExpSum expanded to complex coefficients")
        c = c.real.astype(complex)
    return FractalSeries.from_coeffs(e.zeta, c)


def expsum_eval(e: ExpSum, mu: float) -> float | complex:
    """Evaluate the closed form at ``mu``; real part for real sums."""
    total = 0j
    scale = 0.0
    for t in e.terms:
        f = ml_eval if t.order == 0 else ml_dlambda_eval
        v = t.coefficient * f(e.zeta, t.rate, mu)
        total += v
        scale += abs(v)
    if not e.real:
        return total
    if abs(total.imag) > REALNESS_TOL * max(scale, 1e-300) and abs(total.imag) > 1e-300:
        raise ConsistencyError(f"real ExpSum evaluated to {total} at mu={mu}")
    return total.real

"""Truncated series in the fractal basis e_k(mu) = mu**(k zeta) / Gamma(1 + k zeta).

A series with coefficients c_0..c_N represents sum_k c_k e_k(mu).  The local
fractional derivative acts by index shift, D e_k = e_{k-1}, so that
E_zeta(lam mu**zeta) (coefficients lam**k) is an eigenfunction.

Internally the coefficients are stored divided by the Gamma ladder, i.e. as
ordinary power-series coefficients in x = mu**zeta.  Pointwise products then
reduce to Cauchy products, and the physical coefficients c_k are exposed
through :attr:`FractalSeries.coeffs`.  Keeping the scaled form lets the
oracle run to several hundred terms without c_k overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Callable

import numpy as np

from .core_numerics import FractalOrder, GammaLadder, gamma_ladder
from .errors import PoleError, TruncationError

__all__ = [
    "DEFAULT_TERMS",
    "POLE_TOL",
    "FractalSeries",
    "gamma_binomial",
    "fs_add",
    "fs_mul",
    "fs_div",
    "fs_lfd",
    "fs_from_ml",
    "fs_eval",
    "fs_eval_remainder",
    "fs_finite_diff_lfd",
]

DEFAULT_TERMS = 64

#: |h_0| below this is a pole, not a small divisor.
POLE_TOL = 1e-12


def _to_scaled(c: np.ndarray, ladder: GammaLadder) -> np.ndarray:
    n = len(c)
    g = ladder.values[:n]
    out = np.empty(n, dtype=complex)
    finite = np.isfinite(g)
    out[finite] = c[finite] / g[finite]
    out[~finite] = c[~finite] * np.exp(-ladder.log_values[:n][~finite])
    return out


def _from_scaled(a: np.ndarray, ladder: GammaLadder) -> np.ndarray:
    n = len(a)
    g = ladder.values[:n]
    out = np.empty(n, dtype=complex)
    finite = np.isfinite(g)
    out[finite] = a[finite] * g[finite]
    with np.errstate(over="ignore", invalid="ignore"):
        big = a[~finite] * np.exp(ladder.log_values[:n][~finite])
    out[~finite] = np.where(a[~finite] == 0, 0, big)
    return out


@dataclass(frozen=True, eq=False)
class FractalSeries:
    """Immutable truncated fractal series of order ``N = len(scaled) - 1``.

    ``scaled[k]`` is c_k / Gamma(1 + k zeta); build instances with
    :meth:`from_coeffs` unless you already have the scaled form.
    """

    zeta: float
    scaled: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "zeta", float(FractalOrder(self.zeta)))
        a = np.array(self.scaled, dtype=complex)
        if a.ndim != 1 or len(a) == 0:
            raise ValueError("series needs a non-empty 1-d coefficient array")
        a.setflags(write=False)
        object.__setattr__(self, "scaled", a)

    @classmethod
    def from_coeffs(cls, zeta: float, coeffs) -> FractalSeries:
        c = np.asarray(coeffs, dtype=complex)
        N = max(len(c) - 1, 1)
        return cls(zeta, _to_scaled(c, gamma_ladder(zeta, N)))

    @classmethod
    def constant(cls, zeta: float, value: complex, N: int = DEFAULT_TERMS) -> FractalSeries:
        a = np.zeros(N + 1, dtype=complex)
        a[0] = value
        return cls(zeta, a)

    @classmethod
    def basis(cls, zeta: float, k: int, N: int = DEFAULT_TERMS) -> FractalSeries:
        """The basis function e_k truncated at order N."""
        c = np.zeros(N + 1, dtype=complex)
        c[k] = 1.0
        return cls.from_coeffs(zeta, c)

    @property
    def N(self) -> int:
        return len(self.scaled) - 1

    @property
    def ladder(self) -> GammaLadder:
        return gamma_ladder(self.zeta, max(self.N, 1))

    @property
    def coeffs(self) -> np.ndarray:
        """Coefficients c_k in the e_k basis (may overflow to inf for huge N)."""
        return _from_scaled(self.scaled, self.ladder)

    def truncate(self, N: int) -> FractalSeries:
        if N > self.N:
            raise ValueError(f"cannot extend a series of order {self.N} to {N}")
        return FractalSeries(self.zeta, self.scaled[: N + 1])

    def real_coeffs(self, atol: float = 1e-12) -> np.ndarray:
        c = self.coeffs
        if np.any(np.abs(c.imag) > atol * np.maximum(1.0, np.abs(c.real))):
            raise ValueError("series has non-negligible imaginary coefficients")
        return c.real

    def __call__(self, mu: float) -> complex:
        return fs_eval(self, mu)

    def _lift(self, other) -> FractalSeries:
        if isinstance(other, FractalSeries):
            return other
        if isinstance(other, Number):
            return FractalSeries.constant(self.zeta, other, self.N)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fs_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fs_add(self, other, 1.0, -1.0)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fs_add(other, self, 1.0, -1.0)

    def __neg__(self):
        return FractalSeries(self.zeta, -self.scaled)

    def __mul__(self, other):
        if isinstance(other, FractalSeries):
            return fs_mul(self, other)
        if isinstance(other, Number):
            return FractalSeries(self.zeta, self.scaled * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FractalSeries):
            return fs_div(self, other)
        if isinstance(other, Number):
            return FractalSeries(self.zeta, self.scaled / other)
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fs_div(other, self)

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:4])
        return f"FractalSeries(zeta={self.zeta:.6g}, N={self.N}, coeffs=[{head}, ...])"


def gamma_binomial(zeta: float, N: int) -> np.ndarray:
    """Matrix B[j, k] = Gamma(1+(j+k)zeta) / (Gamma(1+j zeta) Gamma(1+k zeta)).

    These are the structure constants of the pointwise product written in
    the e_k basis: (f g)_n = sum_j B[j, n-j] f_j g_{n-j}.
    """
    ladder = gamma_ladder(zeta, 2 * N)
    j = np.arange(N + 1)
    jk = j[:, None] + j[None, :]
    g = ladder.values
    if np.all(np.isfinite(g)):
        return g[jk] / (g[j][:, None] * g[j][None, :])
    lg = ladder.log_values
    return np.exp(lg[jk] - lg[j][:, None] - lg[j][None, :])


def _align(f: FractalSeries, g: FractalSeries) -> int:
    if f.zeta != g.zeta:
        raise ValueError(f"series have different orders: {f.zeta} vs {g.zeta}")
    return min(f.N, g.N)


def fs_add(f: FractalSeries, g: FractalSeries, a: complex = 1.0, b: complex = 1.0) -> FractalSeries:
    """Linear combination a*f + b*g, truncated to the shorter operand."""
    n = _align(f, g)
    return FractalSeries(f.zeta, a * f.scaled[: n + 1] + b * g.scaled[: n + 1])


def fs_mul(f: FractalSeries, g: FractalSeries) -> FractalSeries:
    """Pointwise product f(mu) g(mu) as a series."""
    n = _align(f, g)
    prod = np.convolve(f.scaled[: n + 1], g.scaled[: n + 1])[: n + 1]
    return FractalSeries(f.zeta, prod)


def fs_div(f: FractalSeries, h: FractalSeries) -> FractalSeries:
    """Quotient f / h by forward substitution.

    Raises ``PoleError`` when h has a (numerically) zero constant term.
    """
    n = _align(f, h)
    h0 = h.scaled[0]
    if abs(h0) < POLE_TOL:
        raise PoleError("division by series with zero constant term")
    fa, ha = f.scaled, h.scaled
    q = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        acc = fa[k] - np.dot(q[:k], ha[k:0:-1]) if k else fa[0]
        q[k] = acc / h0
    return FractalSeries(f.zeta, q)


def fs_lfd(f: FractalSeries) -> FractalSeries:
    """Local fractional derivative: c_k -> c_{k+1}, truncation drops by one."""
    if f.N < 1:
        raise ValueError("derivative needs a series of order >= 1")
    ladder = f.ladder
    ratios = np.array([1.0 / ladder.ratio(k) for k in range(f.N)])
    return FractalSeries(f.zeta, f.scaled[1:] * ratios)


def fs_from_ml(zeta: float, lam: complex, N: int = DEFAULT_TERMS) -> FractalSeries:
    """Series of E_zeta(lam mu**zeta): coefficients lam**k."""
    c = np.ones(N + 1, dtype=complex)
    for k in range(1, N + 1):
        c[k] = c[k - 1] * lam
    return FractalSeries.from_coeffs(zeta, c)


def fs_eval_remainder(f: FractalSeries, mu: float) -> tuple[complex, float]:
    """Value of the truncated series at ``mu`` and a tail estimate.

    The tail is extrapolated geometrically from the decay of the last eight
    terms; it is ``inf`` when those terms are not decaying.
    """
    if mu < 0.0 or not math.isfinite(mu):
        raise ValueError(f"mu must be finite and >= 0, got {mu!r}")
    a = f.scaled
    if mu == 0.0:
        return complex(a[0]), 0.0
    logx = f.zeta * math.log(mu)
    k = np.arange(len(a))
    with np.errstate(over="ignore", invalid="ignore"):
        terms = a * np.exp(k * logx)
    if not np.all(np.isfinite(terms)):
        return complex(np.nan, np.nan), math.inf
    value = complex(np.sum(terms))
    mags = np.abs(terms)
    if len(mags) < 8:
        return value, float(mags[-1])
    late, early = mags[-4:].max(), mags[-8:-4].max()
    if late == 0.0:
        return value, 0.0
    if early == 0.0:
        return value, math.inf
    rho = (late / early) ** 0.25
    if rho >= 1.0:
        return value, math.inf
    return value, float(late * rho / (1.0 - rho))


def fs_eval(f: FractalSeries, mu: float, tol: float | None = 1e-9) -> complex:
    """Evaluate sum_k c_k e_k(mu).

    Raises ``TruncationError`` when the tail estimate exceeds
    ``tol * max(1, |value|)``; pass ``tol=None`` to skip the check.
    """
    value, rem = fs_eval_remainder(f, mu)
    if tol is not None and not rem <= tol * max(1.0, abs(value)):
        raise TruncationError(
            f"insufficient truncation order N={f.N} at mu={mu}: tail ~ {rem:.3g}"
        )
    return value


def fs_finite_diff_lfd(
    f: Callable[[float], complex], mu0: float, h: float, zeta: float
) -> float:
    """Difference quotient Gamma(1+zeta) [f(mu0+h) - f(mu0)] / h**zeta.

    Diagnostic only: no limit is taken.  At interior points of basis
    functions it tends to zero rather than to the operational derivative.
    """
    if not h > 0.0:
        raise ValueError("step h must be positive")
    zeta = FractalOrder(zeta)
    g1 = gamma_ladder(zeta, 1).values[1]
    diff = complex(f(mu0 + h)) - complex(f(mu0))
    return float((g1 * diff / h**zeta).real)

"""Gamma function machinery and the one-parameter Mittag-Leffler family.

Everything here works on the positive real axis of the Gamma function and
evaluates

    E_zeta(lam * mu**zeta) = sum_k lam**k mu**(k zeta) / Gamma(1 + k zeta)

by direct summation, which is all the closed-form solutions need.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PrecisionLossError, RangeGuardError, TruncationError

__all__ = [
    "CANTOR_ZETA",
    "CANCELLATION_THRESHOLD",
    "MAX_TERMS",
    "FractalOrder",
    "GammaLadder",
    "gamma_real",
    "log_gamma_real",
    "gamma_ladder",
    "ml_eval",
    "ml_dlambda_eval",
]

#: Order of the middle-third Cantor set, ln 2 / ln 3.
CANTOR_ZETA = math.log(2.0) / math.log(3.0)

#: Largest |lam| mu**zeta accepted for alternating (non-positive) rates.
CANCELLATION_THRESHOLD = 30.0

#: Peak-term / |sum| ratio beyond which no significant digit survives.
MAX_CANCELLATION = 1e16

#: Hard cap on the number of Mittag-Leffler series terms.
MAX_TERMS = 512

DEFAULT_TOL = 2.0**-53

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class FractalOrder(float):
    """A float restricted to the interval (0, 1]."""

    def __new__(cls, zeta: float) -> FractalOrder:
        value = float(zeta)
        if not (0.0 < value <= 1.0):
            raise ValueError(f"fractal order must satisfy 0 < zeta <= 1, got {zeta!r}")
        return super().__new__(cls, value)


def _lanczos_sum(x: float) -> tuple[float, float]:
    # x is already shifted by -1; returns (series, t)
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (x + i)
    return acc, x + _LANCZOS_G + 0.5


def gamma_real(x: float) -> float:
    """Gamma function for positive real ``x``.

    Returns ``inf`` once the result exceeds the double range (x > ~171.6).
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma_real requires x > 0, got {x!r}")
    if x < 0.5:
        return gamma_real(x + 1.0) / x
    if x > 171.7:
        return math.inf
    acc, t = _lanczos_sum(x - 1.0)
    if x < 100.0:
        return math.sqrt(2.0 * math.pi) * t ** (x - 0.5) * math.exp(-t) * acc
    half = t ** (0.5 * (x - 0.5))
    value = math.sqrt(2.0 * math.pi) * half * math.exp(-t) * acc * half
    return value if math.isfinite(value) else math.inf


def log_gamma_real(x: float) -> float:
    """Natural log of Gamma for positive real ``x``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"log_gamma_real requires x > 0, got {x!r}")
    if x < 0.5:
        return log_gamma_real(x + 1.0) - math.log(x)
    if x < 20.0:
        return math.log(gamma_real(x))
    acc, t = _lanczos_sum(x - 1.0)
    return _LOG_SQRT_2PI + (x - 0.5) * math.log(t) - t + math.log(acc)


@dataclass(frozen=True)
class GammaLadder:
    """Values g_k = Gamma(1 + k zeta) for k = 0..N.

    ``values`` overflows to ``inf`` for large k; ``log_values`` never does.
    """

    zeta: float
    values: np.ndarray
    log_values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def ratio(self, k: int) -> float:
        """g_k / g_{k+1}, computed without overflow."""
        num, den = self.values[k], self.values[k + 1]
        if math.isfinite(num) and math.isfinite(den):
            return float(num / den)
        return math.exp(self.log_values[k] - self.log_values[k + 1])


@lru_cache(maxsize=64)
def _ladder(zeta: float, N: int) -> GammaLadder:
    vals = np.empty(N + 1)
    logs = np.empty(N + 1)
    vals[0], logs[0] = 1.0, 0.0
    for k in range(1, N + 1):
        x = 1.0 + k * zeta
        logs[k] = log_gamma_real(x)
        vals[k] = gamma_real(x)
    vals.setflags(write=False)
    logs.setflags(write=False)
    return GammaLadder(zeta, vals, logs)


def gamma_ladder(zeta: float, N: int) -> GammaLadder:
    """Cached, read-only ladder Gamma(1 + k zeta), k = 0..N."""
    zeta = FractalOrder(zeta)
    if N < 1:
        raise ValueError(f"ladder length N must be >= 1, got {N}")
    return _ladder(float(zeta), int(N))


def _check_args(zeta: float, mu: float, tol: float) -> float:
    zeta = FractalOrder(zeta)
    if mu < 0.0 or not math.isfinite(mu):
        raise ValueError(f"mu must be finite and >= 0, got {mu!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    return float(zeta)


def _guard(lam: complex, x: float) -> None:
    lam = complex(lam)
    alternating = lam.imag != 0.0 or lam.real < 0.0
    if alternating and abs(lam) * x > CANCELLATION_THRESHOLD:
        raise PrecisionLossError(
            f"|lambda| mu^zeta = {abs(lam) * x:.4g} exceeds {CANCELLATION_THRESHOLD}; "
            "alternating Mittag-Leffler sum would lose all digits"
        )


def _sum_terms(terms, tol: float) -> complex:
    """Sum an iterator of series terms with the adaptive stopping rule."""
    total = 0j
    peak = 0.0
    small = 0
    terms = iter(terms)
    for k in itertools.count():
        try:
            t = next(terms)
            total += t
            mag = abs(t)
            size = abs(total)
        except StopIteration:
            break
        except OverflowError:
            mag = size = math.inf
        if not (math.isfinite(mag) and math.isfinite(size)):
            raise RangeGuardError("Mittag-Leffler term overflowed")
        peak = max(peak, mag)
        floor = tol * max(size, peak * DEFAULT_TOL)
        small = small + 1 if mag <= floor else 0
        if small >= 2 and k >= 2:
            if peak > MAX_CANCELLATION * size:
                raise PrecisionLossError(
                    f"series cancellation: peak term {peak:.3g} vs sum {abs(total):.3g}"
                )
            return total
    raise TruncationError(f"Mittag-Leffler series did not converge within {MAX_TERMS} terms")


def ml_eval(zeta: float, lam: complex, mu: float, tol: float = DEFAULT_TOL) -> complex:
    """E_zeta(lam * mu**zeta) by direct summation.

    Raises ``PrecisionLossError`` for alternating series with
    ``|lam| mu**zeta`` above ``CANCELLATION_THRESHOLD``.
    """
    zeta = _check_args(zeta, mu, tol)
    if mu == 0.0 or lam == 0:
        return 1.0 + 0j
    x = mu**zeta
    if x == 0.0:
        return 1.0 + 0j
    _guard(lam, x)
    ladder = gamma_ladder(zeta, MAX_TERMS)
    # separate logs: lam * x may underflow even when neither factor does
    logz = cmath.log(complex(lam)) + math.log(x)

    def terms():
        yield 1.0 + 0j
        for k in range(1, MAX_TERMS + 1):
            yield cmath.exp(k * logz - ladder.log_values[k])

    return _sum_terms(terms(), tol)


def ml_dlambda_eval(zeta: float, lam: complex, mu: float, tol: float = DEFAULT_TOL) -> complex:
    """Derivative in ``lam`` of E_zeta(lam * mu**zeta).

    Series: sum_{k>=1} k lam**(k-1) mu**(k zeta) / Gamma(1 + k zeta).
    """
    zeta = _check_args(zeta, mu, tol)
    if mu == 0.0:
        return 0j
    x = mu**zeta
    ladder = gamma_ladder(zeta, MAX_TERMS)
    if lam == 0 or x == 0.0:
        return complex(x / ladder.values[1])
    _guard(lam, x)
    logx = math.log(x)
    logz = cmath.log(complex(lam)) + logx

    def terms():
        for k in range(1, MAX_TERMS + 1):
            yield k * cmath.exp((k - 1) * logz + logx - ladder.log_values[k])

    return _sum_terms(terms(), tol)

"""Formulas exactly as printed for the reference worked example.

The reference problem is D^z Phi = 1 + 3 Phi + Phi**2, Phi(0) = 1, solved at
zeta = ln 2 / ln 3.  The printed constants and closed form are reproduced
here verbatim so that reports can set them against what the solver computes.
Nothing in the solver itself depends on this module.
"""

from __future__ import annotations

import math

from .core_numerics import ml_eval

SQRT5 = math.sqrt(5.0)

#: Coefficients (w0, w1, w2) and initial value of the worked example.
EXAMPLE_COEFFS = (1.0, 3.0, 1.0)
EXAMPLE_PHI0 = 1.0

PRINTED_DISCRIMINANT = 5.0
PRINTED_POLE_PLUS = (3.0 + SQRT5) / 2.0
PRINTED_POLE_MINUS = (3.0 - SQRT5) / 2.0
# residues are printed as multiples of alpha, with beta = -alpha
PRINTED_RESIDUE_PLUS_PER_ALPHA = (SQRT5 - 11.0) / (2.0 * SQRT5)
PRINTED_RESIDUE_MINUS_PER_ALPHA = (SQRT5 - 5.0) / (2.0 * SQRT5)


def printed_transform_numerator(w1: float, alpha: float, beta: float) -> tuple[float, float]:
    """Printed numerator alpha z + beta (1 + w1), ascending powers of z."""
    return (beta * (1.0 + w1), alpha)


def printed_residues(w1: float, q: float, alpha: float, beta: float) -> tuple[float, float]:
    """Printed general residue formulas for the distinct-real branch."""
    root = math.sqrt(w1 * w1 - 4.0 * q)
    shift = (beta * (1.0 + w1) - alpha * w1 / 2.0) / root
    return alpha / 2.0 + shift, alpha / 2.0 - shift


def printed_example_phi(mu: float, zeta: float) -> float:
    """The printed closed-form solution of the worked example."""
    e_plus = ml_eval(zeta, -PRINTED_POLE_PLUS, mu).real
    e_minus = ml_eval(zeta, -PRINTED_POLE_MINUS, mu).real
    num = (SQRT5 - 11.0) * (3.0 + SQRT5) * e_plus + (SQRT5 - 5.0) * (3.0 - SQRT5) * e_minus
    den = 2.0 * (SQRT5 - 11.0) * e_plus + 2.0 * (SQRT5 - 5.0) * e_minus
    return num / den

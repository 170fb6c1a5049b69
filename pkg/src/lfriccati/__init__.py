"""Local fractional Riccati equations: closed forms, series oracle, reports."""

from .core_numerics import (
    CANTOR_ZETA,
    FractalOrder,
    gamma_ladder,
    gamma_real,
    ml_dlambda_eval,
    ml_eval,
)
from .errors import (
    ConsistencyError,
    NumericalGuardError,
    PoleError,
    PrecisionLossError,
    RangeGuardError,
    TruncationError,
)
from .fractal_series import (
    FractalSeries,
    fs_add,
    fs_div,
    fs_eval,
    fs_finite_diff_lfd,
    fs_from_ml,
    fs_lfd,
    fs_mul,
    gamma_binomial,
)
from .laplace_engine import (
    ExpSum,
    PartialFractions,
    RationalZ,
    decompose,
    expsum_eval,
    expsum_to_series,
    invert,
    lflt_ivp,
)
from .riccati_solver import (
    ClosedFormSolution,
    DiscrepancyReport,
    InitialData,
    LinearODE,
    RiccatiProblem,
    compare_semantics,
    find_pole,
    ic_map,
    recover_phi,
    reduce_to_linear,
    residual,
    solve_constant,
    solve_linear_series,
    solve_series,
)

__version__ = "0.1.0"

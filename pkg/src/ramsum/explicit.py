"""Truncated explicit formulas over zeta zeros.

Two evaluators are provided: the half-jump summatory function of
c_q^(beta)(n), and the generalized Chebyshev function psi_m^(beta). Each
returns an :class:`ExplicitEvaluation` holding the individual terms next to
the exact value from :mod:`ramsum.arith`, so residuals can be swept over x.

Zeros enter as conjugate pairs: a pair contributes ``2 Re(term(rho))``, so the
zero sum is real by construction. The multiple-zero correction is taken as
identically zero (every tabulated zero is simple).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import SumParams, beta_power_divisors, sigma, sigma_at, summatory_c, summatory_psi
from .zeta import ZeroTable, zeta_odd

__all__ = [
    "ExplicitEvaluation",
    "SeriesDivergenceError",
    "zero_sum_c",
    "trivial_series_c",
    "explicit_c",
    "zero_sum_psi",
    "trivial_series_psi",
    "explicit_psi",
]

_TWO_PI = 2.0 * math.pi
_MAX_TERMS = 2000


class SeriesDivergenceError(ArithmeticError):
    """The trivial-zero series failed to settle."""


@dataclass(frozen=True)
class ExplicitEvaluation:
    x: float
    constant_term: float
    zero_sum: float
    trivial_series: float
    formula_total: float
    actual_sharp: float
    residual: float
    leading_term: float = 0.0
    pairs: int = 0
    truncation_height: float = 0.0


def _zero_pairs_sum(x: float, weights: np.ndarray, rho: np.ndarray) -> float:
    terms = 2.0 * np.real(weights * np.exp(rho * math.log(x)) / rho)
    return math.fsum(terms.tolist())


def zero_sum_c(x: float, params: SumParams, table: ZeroTable, pairs: int) -> float:
    """Paired sum of sigma_{1-rho/beta}(n) x^rho / (zeta'(rho) rho) over ``pairs`` zeros."""
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    rho = table.rho(pairs)
    if rho.size == 0:
        return 0.0
    weights = sigma_at(rho, params, shift=1.0) / table.dzeta(pairs)
    return _zero_pairs_sum(x, weights, rho)


def _settled_series(term_at, ratio_bound: float, tol: float) -> float:
    """Sum ``term_at(k)`` for k >= 1 until terms fall below ``tol``.

    ``ratio_bound`` is the index past which the terms are known to decrease;
    growth for three consecutive terms beyond it signals numerical breakdown.
    """
    terms = []
    growth = 0
    prev = math.inf
    for k in range(1, _MAX_TERMS + 1):
        t = term_at(k)
        if not math.isfinite(t):
            raise SeriesDivergenceError(f"non-finite term at k={k}")
        terms.append(t)
        if k > ratio_bound:
            if abs(t) < tol:
                return math.fsum(terms)
            growth = growth + 1 if abs(t) > abs(prev) else 0
            if growth >= 3:
                raise SeriesDivergenceError(f"terms grew for 3 consecutive k up to k={k}")
        prev = t
    raise SeriesDivergenceError(f"series not settled after {_MAX_TERMS} terms")


def trivial_series_c(x: float, params: SumParams, tol: float = 1e-16) -> float:
    """Contribution of the trivial zeros to the explicit formula for c_q sums.

    Sums ``-(-1)^k (2 pi/x)^{2k} sigma_{1+2k/beta}(n) / ((2k)! k zeta(2k+1))``.
    The series converges for every x > 0; for x below 2 pi max(d) the terms
    first grow before decaying, which costs digits but stays well inside
    double precision at desk scale.
    """
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    divs = beta_power_divisors(params)
    beta = params.beta
    # u[d] = d^beta (2 pi d / x)^{2k} / (2k)!, advanced by ratio
    ratios = [(_TWO_PI * d / x) ** 2 for d in divs]
    state = [float(d**beta) for d in divs]
    peak = max(math.sqrt(r) for r in ratios) / 2

    def term(k: int) -> float:
        for i, r in enumerate(ratios):
            state[i] *= r / ((2 * k - 1) * (2 * k))
        inner = math.fsum(state)
        return -((-1) ** k) * inner / (k * zeta_odd(k))

    return _settled_series(term, peak, tol)


def explicit_c(x: float, params: SumParams, table: ZeroTable, pairs: int,
               tol: float = 1e-16) -> ExplicitEvaluation:
    """Evaluate the truncated explicit formula for the half-jump c_q summatory function."""
    constant = -2.0 * sigma(1, params)
    zs = zero_sum_c(x, params, table, pairs)
    triv = trivial_series_c(x, params, tol)
    total = constant + zs + triv
    actual = summatory_c(x, params).sharp
    return ExplicitEvaluation(
        x=float(x), constant_term=float(constant), zero_sum=zs, trivial_series=triv,
        formula_total=total, actual_sharp=float(actual), residual=float(actual) - total,
        pairs=pairs, truncation_height=table.truncation_height(pairs),
    )


def zero_sum_psi(x: float, m: int, beta: int, table: ZeroTable, pairs: int) -> float:
    """Minus the paired sum of sigma_{1-rho/beta}(m) x^rho / rho."""
    if x <= m:
        raise ValueError(f"x must exceed m={m}, got {x}")
    rho = table.rho(pairs)
    if rho.size == 0:
        return 0.0
    weights = sigma_at(rho, SumParams(m, beta), shift=1.0)
    return -_zero_pairs_sum(x, weights, rho)


def trivial_series_psi(x: float, m: int, beta: int, tol: float = 1e-17) -> float:
    """``-sum_k sigma_{1+2k/beta}(m) x^{-2k} / (2k)``.

    For m = beta = 1 this is ``log(1 - x^-2) / 2``. The explicit formula
    subtracts this value (the trivial zeros contribute
    ``+sum_k sigma x^{-2k}/(2k)``, see :func:`explicit_psi`).
    """
    if x <= m:
        raise ValueError(f"x must exceed m={m}, got {x}")
    params = SumParams(m, beta)
    divs = beta_power_divisors(params)
    ratios = [(d / x) ** 2 for d in divs]
    state = [float(d**beta) for d in divs]

    def term(k: int) -> float:
        for i, r in enumerate(ratios):
            state[i] *= r
        return -math.fsum(state) / (2 * k)

    return _settled_series(term, 0, tol)


def explicit_psi(x: float, m: int, beta: int, table: ZeroTable, pairs: int,
                 tol: float = 1e-17) -> ExplicitEvaluation:
    """Evaluate the truncated explicit formula for psi_m^(beta).

    The ``trivial_series`` field holds the contribution actually added to the
    total, i.e. ``-trivial_series_psi(...)``.
    """
    params = SumParams(m, beta)
    leading = complex(sigma(1.0 - 1.0 / beta, params)).real * x
    constant = -sigma(1, params) * math.log(_TWO_PI)
    zs = zero_sum_psi(x, m, beta, table, pairs)
    triv = -trivial_series_psi(x, m, beta, tol)
    total = leading + constant + zs + triv
    actual = summatory_psi(x, m, beta).sharp
    return ExplicitEvaluation(
        x=float(x), constant_term=float(constant), zero_sum=zs, trivial_series=triv,
        formula_total=total, actual_sharp=actual, residual=actual - total,
        leading_term=leading, pairs=pairs, truncation_height=table.truncation_height(pairs),
    )

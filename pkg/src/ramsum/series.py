"""Dirichlet-series diagnostics for c_q^(beta)(n) and the growth probe."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import mpmath
import numpy as np

from ._numerics import fsum_complex, segmented_prefix_sums
from .arith import SumParams, beta_power_divisors, cohen_sum_table, sigma, von_mangoldt_table
from .zeta import zeta_eval, zeta_prime

__all__ = [
    "SeriesDiagnostic",
    "NearZetaZeroError",
    "dirichlet_partial",
    "dirichlet_target",
    "convergence_sweep",
    "convergence_sweep_mp",
    "mangoldt_series_check",
    "growth_exponent",
    "fit_growth_exponent",
    "windowed_rms",
]


class NearZetaZeroError(ZeroDivisionError):
    """The closed-form target divides by a vanishing zeta value."""


@dataclass(frozen=True)
class SeriesDiagnostic:
    s: complex
    cutoffs: tuple[int, ...]
    partials: tuple[complex, ...]
    target: complex
    residuals: tuple[float, ...]


def _terms(s: complex, params: SumParams, qmax: int) -> np.ndarray:
    c = cohen_sum_table(qmax, params)
    q = np.arange(1, qmax + 1, dtype=float)
    return c[1:] * np.exp(-complex(s) * np.log(q))


def dirichlet_partial(s: complex, params: SumParams, Q: int) -> complex:
    """``sum_{q <= Q} c_q^(beta)(n) q^{-s}``, correctly rounded."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    return fsum_complex(_terms(s, params, Q))


def dirichlet_target(s: complex, params: SumParams) -> complex:
    """Closed form ``sigma_{1-s/beta}(n) / zeta(s)``; zero at the pole s = 1."""
    s = complex(s)
    if abs(s - 1) < 1e-12:
        return 0j
    z = zeta_eval(s)
    if abs(z) < 1e-12:
        raise NearZetaZeroError(f"|zeta({s})| = {abs(z):.3g}")
    return complex(sigma(1 - s / params.beta, params)) / z


def convergence_sweep(s: complex, params: SumParams, cutoffs: Sequence[int]) -> SeriesDiagnostic:
    cutoffs = tuple(int(q) for q in cutoffs)
    if not cutoffs or any(b < a for a, b in zip(cutoffs, cutoffs[1:])) or cutoffs[0] < 1:
        raise ValueError("cutoffs must be a non-empty ascending list of positive integers")
    partials = segmented_prefix_sums(_terms(s, params, cutoffs[-1]), cutoffs)
    target = dirichlet_target(s, params)
    return SeriesDiagnostic(
        s=complex(s), cutoffs=cutoffs, partials=tuple(partials), target=target,
        residuals=tuple(abs(p - target) for p in partials),
    )


def convergence_sweep_mp(s: complex, params: SumParams, cutoffs: Sequence[int],
                         dps: int = 50) -> SeriesDiagnostic:
    """:func:`convergence_sweep` carried out in mpmath at ``dps`` digits.

    For large Re s the residuals fall below double-precision resolution well
    before the largest cutoff; this variant keeps them resolvable. Partials and
    target are rounded to complex on return, residuals are computed before
    rounding.
    """
    cutoffs = tuple(int(q) for q in cutoffs)
    if not cutoffs or any(b < a for a, b in zip(cutoffs, cutoffs[1:])) or cutoffs[0] < 1:
        raise ValueError("cutoffs must be a non-empty ascending list of positive integers")
    c = cohen_sum_table(cutoffs[-1], params)
    with mpmath.workdps(dps):
        s_mp = mpmath.mpc(complex(s).real, complex(s).imag)
        if abs(s_mp - 1) < mpmath.mpf(10) ** (-12):
            target = mpmath.mpc(0)
        else:
            zeta_s = mpmath.zeta(s_mp)
            if abs(zeta_s) < 1e-12:
                raise NearZetaZeroError(f"|zeta({s})| = {float(abs(zeta_s)):.3g}")
            beta = params.beta
            sig = mpmath.fsum(mpmath.mpf(d) ** (beta - s_mp) for d in beta_power_divisors(params))
            target = sig / zeta_s
        partials, residuals = [], []
        total = mpmath.mpc(0)
        prev = 0
        for cut in cutoffs:
            nz = np.flatnonzero(c[prev + 1 : cut + 1]) + prev + 1
            total += mpmath.fsum(int(c[q]) * mpmath.power(int(q), -s_mp) for q in nz)
            partials.append(complex(total))
            residuals.append(float(abs(total - target)))
            prev = cut
        return SeriesDiagnostic(s=complex(s), cutoffs=cutoffs, partials=tuple(partials),
                                target=complex(target), residuals=tuple(residuals))


def mangoldt_series_check(s: complex, m: int, beta: int, Q: int) -> tuple[complex, complex]:
    """Partial Dirichlet series of Lambda_{1,m}^(beta) and its closed form.

    The closed form is ``-sigma_{1-s/beta}(m) zeta'(s)/zeta(s)`` (Re s > 1).
    """
    s = complex(s)
    if s.real <= 1:
        raise ValueError(f"need Re s > 1, got {s}")
    lam = von_mangoldt_table(Q, m, beta)[1:]
    j = np.arange(1, Q + 1, dtype=float)
    partial = fsum_complex(lam * np.exp(-s * np.log(j)))
    target = -complex(sigma(1 - s / beta, SumParams(m, beta))) * zeta_prime(s) / zeta_eval(s)
    return partial, target


def windowed_rms(values: Sequence[complex], lo: int, hi: int) -> float:
    """RMS of ``|values[Q-1]|`` for ``lo <= Q <= hi`` (``values`` indexed from Q = 1)."""
    window = np.abs(np.asarray(values)[lo - 1 : hi])
    return float(np.sqrt(np.mean(window**2)))


def fit_growth_exponent(values: np.ndarray) -> float:
    """Slope of log(running max |v|) against log x over dyadic checkpoints.

    ``values[x]`` is the summatory function at integer x (``values[0]`` is
    ignored). Only the upper half of the checkpoints enters the fit. Returns
    NaN when the values vanish identically over that upper range.
    """
    values = np.asarray(values)
    xmax = values.size - 1
    if xmax < 4:
        raise ValueError("need values up to at least x = 4")
    running = np.maximum.accumulate(np.abs(values[1:].astype(float)))
    checkpoints = [2**k for k in range(1, int(math.log2(xmax)) + 1)]
    upper = checkpoints[len(checkpoints) // 2 :]
    if len(upper) < 2 or not np.any(values[upper[0] :]):
        return math.nan
    xs = np.log(np.asarray(upper, dtype=float))
    ys = np.log(running[np.asarray(upper) - 1])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def growth_exponent(params: SumParams, xmax: int) -> float:
    """Empirical growth exponent of the summatory function of c_q^(beta)(n).

    A heuristic probe: under RH the exponent should not exceed 1/2 + eps.
    """
    if xmax < 100:
        raise ValueError(f"xmax must be >= 100, got {xmax}")
    summatory = np.cumsum(cohen_sum_table(xmax, params))
    return fit_growth_exponent(summatory)

"""Numerical Bartz functions built from c_q^(beta)(n).

The zero sum

    varpi(z) = sum_{gamma > 0} sigma_{1-rho/beta}(n) / zeta'(rho) * exp(rho z)

converges for Im z > 0. There it splits as

    2 pi i varpi(z) = varpi1(z) + varpi2(z) + varpi3(z)

with ``varpi1`` the integral down the line Re s = -1/2, ``varpi2`` the
integral along [-1/2, 3/2] and ``varpi3`` an explicit meromorphic series with
poles at z = log q. For |Im z| < pi the line integral is continued by writing
``1/zeta(s)`` through the functional equation; the resulting entire series
(and the A-series of the functional equation) suffer heavy cancellation once
``2 pi n e^{-Re z}`` is large, so they are summed in mpmath at a working
precision sized from the largest term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import loggamma

from ._numerics import QuadratureError, fsum_complex, simpson_halving
from .arith import SumParams, beta_power_divisors, cohen_sum, cohen_sum_table, mobius_table, sigma, sigma_at
from .config import TruncationConfig
from .zeta import ZeroTable, zeta_eval

__all__ = [
    "BartzEvaluation",
    "FunctionalEquationCheck",
    "PoleProximityError",
    "varpi_zero_sum",
    "varpi1",
    "varpi2",
    "varpi3",
    "varpi3_tail_bound",
    "varpi1_continued",
    "varpi_continued",
    "evaluate_decomposition",
    "a_series",
    "a_series_statement_form",
    "a_series_double_sum",
    "functional_equation_residual",
    "functional_equation_check",
    "residue_probe",
]

_LOG_2PI = math.log(2 * math.pi)
_TAIL_TOL = 1e-10
# sup over t >= 0 of |1/zeta(-1/2 + it)| is attained near t = 0 (1/|zeta(-1/2)| ~ 4.81)
_INV_ZETA_LINE_BOUND = 5.0
# |Gamma(-1/2 + it)| e^{pi|t|/2} <= 2 sqrt(pi) and 1/|zeta(3/2 + it)| <= zeta(3/2)/zeta(3)
_GAMMA_OVER_ZETA_BOUND = 2 * math.sqrt(math.pi) * 2.1732


class PoleProximityError(ZeroDivisionError):
    """Evaluation point too close to a pole z = log q of varpi3."""


@dataclass(frozen=True)
class BartzEvaluation:
    z: complex
    varpi_zero_sum: complex
    varpi1: complex
    varpi2: complex
    varpi3: complex
    decomposition_residual: complex


@dataclass(frozen=True)
class FunctionalEquationCheck:
    """Residuals of ``varpi(z) + conj(varpi(conj z)) - A(z)`` for both A-forms."""

    z: complex
    lhs: complex
    a_derived: complex
    a_stated: complex
    residual_derived: complex
    residual_stated: complex


def _as_array(z) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(z) == 0
    return np.atleast_1d(np.asarray(z, dtype=complex)), scalar


def _unwrap(values: np.ndarray, scalar: bool):
    return complex(values[0]) if scalar else values


def _inverse_zeta_kernel(s: np.ndarray, params: SumParams) -> np.ndarray:
    """sigma_{1-s/beta}(n) / zeta(s), continued by 0 at the pole s = 1."""
    s = np.asarray(s, dtype=complex)
    out = np.zeros(s.shape, dtype=complex)
    ok = np.abs(s - 1) >= 1e-12
    out[ok] = sigma_at(s[ok], params, shift=1.0) / zeta_eval(s[ok])
    return out


def _sigma_bound(params: SumParams, real_shift: float) -> float:
    """Upper bound for |sigma_{1-s/beta}(n)| on Re s = -real_shift."""
    return float(complex(sigma(1 + real_shift / params.beta, params)).real)


# -- the zero sum ------------------------------------------------------------

def varpi_zero_sum(z, params: SumParams, table: ZeroTable, count: int):
    """Truncated zero sum over the first ``count`` ordinates (upper half only)."""
    zz, scalar = _as_array(z)
    if np.any(zz.imag <= 0):
        raise ValueError("the zero sum needs Im z > 0")
    rho = table.rho(count)
    if rho.size == 0:
        return _unwrap(np.zeros(zz.shape, dtype=complex), scalar)
    weights = sigma_at(rho, params, shift=1.0) / table.dzeta(count)
    terms = weights[None, :] * np.exp(np.outer(zz, rho))
    return _unwrap(np.array([fsum_complex(row) for row in terms]), scalar)


# -- the three pieces of the decomposition ----------------------------------

def _auto_cut(bound: float, rate: float, tol: float) -> float:
    return max(1.0, math.log(max(bound, 1e-300) / (rate * tol)) / rate)


def varpi1(z, params: SumParams, t_cut: float | None = None, step: float = 0.25,
           tol: float = 1e-9):
    """Integral of sigma_{1-s/beta}(n) e^{sz} / zeta(s) from -1/2 + i inf down to -1/2.

    Raises:
        QuadratureError: if an explicit ``t_cut`` leaves a tail above 1e-10.
    """
    zz, scalar = _as_array(z)
    y = float(np.min(zz.imag))
    if y <= 0:
        raise ValueError("varpi1 needs Im z > 0")
    bound = _INV_ZETA_LINE_BOUND * _sigma_bound(params, 0.5) * float(np.max(np.exp(-zz.real / 2)))
    tail = bound * math.exp(-(t_cut or 0.0) * y) / y
    if t_cut is None:
        t_cut = _auto_cut(bound, y, _TAIL_TOL)
    elif tail > _TAIL_TOL:
        raise QuadratureError(f"t_cut={t_cut} leaves a tail estimate of {tail:.3g}")

    def integrand(t: np.ndarray) -> np.ndarray:
        s = -0.5 + 1j * t
        return _inverse_zeta_kernel(s, params)[:, None] * np.exp(np.outer(s, zz))

    value, _ = simpson_halving(integrand, 0.0, t_cut, step=step, tol=tol)
    return _unwrap(-1j * value, scalar)


def varpi2(z, params: SumParams, step: float = 0.125, tol: float = 1e-9):
    """Integral of sigma_{1-s/beta}(n) e^{sz} / zeta(s) along the real segment [-1/2, 3/2]."""
    zz, scalar = _as_array(z)

    def integrand(t: np.ndarray) -> np.ndarray:
        s = t.astype(complex)
        return _inverse_zeta_kernel(s, params)[:, None] * np.exp(np.outer(s, zz))

    value, _ = simpson_halving(integrand, -0.5, 1.5, step=step, tol=tol)
    return _unwrap(value, scalar)


@lru_cache(maxsize=16)
def _varpi3_terms(params: SumParams, Q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = cohen_sum_table(Q, params)[1:]
    q = np.flatnonzero(c) + 1
    coef = c[q - 1] * q.astype(float) ** -1.5
    return q, coef, np.log(q.astype(float))


def varpi3(z, params: SumParams, Q: int):
    """``-e^{3z/2} sum_{q <= Q} c_q^(beta)(n) / (q^{3/2} (z - log q))``."""
    zz, scalar = _as_array(z)
    q, coef, logq = _varpi3_terms(params, int(Q))
    out = np.empty(zz.shape, dtype=complex)
    for i, zi in enumerate(zz):
        gap = zi - logq
        near = np.abs(gap) < 1e-9
        if np.any(near):
            raise PoleProximityError(f"z={zi} lies within 1e-9 of log {int(q[near][0])}")
        out[i] = -cmath.exp(1.5 * zi) * fsum_complex(coef / gap)
    return _unwrap(out, scalar)


def varpi3_tail_bound(z: complex, params: SumParams, Q: int) -> float:
    """Bound on the omitted terms q > Q of :func:`varpi3` (comparison with an integral)."""
    z = complex(z)
    dist = max(abs(z.imag), math.log(Q + 1) - z.real)
    if dist <= 0:
        return math.inf
    return float(sigma(1, params)) * math.exp(1.5 * z.real) * 2.0 / (math.sqrt(Q) * dist)


def evaluate_decomposition(z: complex, params: SumParams, table: ZeroTable,
                           cfg: TruncationConfig | None = None) -> BartzEvaluation:
    cfg = cfg or TruncationConfig()
    cfg.check_table(len(table))
    zs = varpi_zero_sum(z, params, table, cfg.zero_pairs)
    v1 = varpi1(z, params, t_cut=cfg.t_cut, step=cfg.quad_step, tol=cfg.quad_tol)
    v2 = varpi2(z, params, step=cfg.quad_step / 2, tol=cfg.quad_tol)
    v3 = varpi3(z, params, cfg.q_cutoff)
    return BartzEvaluation(
        z=complex(z), varpi_zero_sum=zs, varpi1=v1, varpi2=v2, varpi3=v3,
        decomposition_residual=2j * math.pi * zs - (v1 + v2 + v3),
    )


# -- continuation across the real axis --------------------------------------

def _working_dps(params: SumParams, x: float, extra: int = 25) -> int:
    d_max = max(beta_power_divisors(params))
    peak = 2 * math.pi * d_max * math.exp(-x)
    magnitude = (peak + params.beta * math.log(d_max) + math.log(len(beta_power_divisors(params)))) / math.log(10)
    return extra + max(0, int(math.ceil(magnitude)))


@lru_cache(maxsize=None)
def _mp_zeta_int(k: int, dps: int):
    with mpmath.workdps(dps):
        return mpmath.zeta(k)


def _power_series_mp(z: complex, params: SumParams, dps: int, coeff, step: int,
                     k_start: int):
    """``sum_d d^beta sum_{k} coeff(k) (w d)^k`` over k = k_start, k_start+step, ...

    Terms are accumulated until they drop below ``10^-(dps-5)`` relative to the
    largest term seen, after the peak has passed.
    """
    divs = beta_power_divisors(params)
    with mpmath.workdps(dps):
        w = mpmath.exp(-mpmath.mpc(z.real, z.imag))
        total = mpmath.mpc(0)
        biggest = mpmath.mpf(0)
        d_max = max(divs)
        peak_k = 2 * math.pi * d_max * math.exp(-z.real) + 2
        k = k_start
        floor = mpmath.mpf(10) ** (-(dps - 5))
        while True:
            term = mpmath.mpc(0)
            for d in divs:
                term += mpmath.mpf(d) ** params.beta * (w * d) ** k
            term *= coeff(k)
            total += term
            biggest = max(biggest, abs(term))
            if k > peak_k and abs(term) <= floor * max(biggest, 1):
                return total
            k += step
            if k > 20000:
                raise ArithmeticError("entire series failed to settle")


def _entire_part_mp(z: complex, params: SumParams, dps: int):
    """I1(z) = -2 pi i sum_{k>=1} (-2 pi i e^{-z})^k sigma_{1+k/beta}(n) / (k! zeta(k+1))."""
    with mpmath.workdps(dps):
        two_pi_i = 2j * mpmath.pi

        def coeff(k: int):
            return (-two_pi_i) ** k / (mpmath.factorial(k) * _mp_zeta_int(k + 1, dps))

        return -two_pi_i * _power_series_mp(z, params, dps, coeff, 1, 1)


def _gamma_line_integral(w: np.ndarray, params: SumParams, sign: int, step: float,
                         tol: float, t_cut: float | None) -> np.ndarray:
    """Helper for the two pieces of the continued line integral.

    ``sign = -1``: ``i int_0^inf G(-1/2 - it) dt`` with phase ``-i pi/2``
    (converges for Im w < pi). ``sign = +1``: ``-i int_0^inf G(-1/2 + it) dt``
    with phase ``+i pi/2`` (converges for Im w > -pi). Here
    ``G(s) = exp(s (w - log 2 pi + sign i pi/2)) Gamma(s) sigma_{1-s/beta}(n) / zeta(1-s)``.
    """
    rate = math.pi - float(np.max(-sign * w.imag))
    if rate <= 0:
        raise ValueError("continuation needs |Im z| < pi")
    bound = (_GAMMA_OVER_ZETA_BOUND * _sigma_bound(params, 0.5)
             * float(np.max(np.exp(-(w.real - _LOG_2PI) / 2))))
    cut = t_cut if t_cut is not None else _auto_cut(bound, rate, _TAIL_TOL)
    shift = w - _LOG_2PI + sign * 0.5j * math.pi

    def integrand(t: np.ndarray) -> np.ndarray:
        s = -0.5 + sign * 1j * t
        base = sigma_at(s, params, shift=1.0) / zeta_eval(1 - s)
        return base[:, None] * np.exp(np.outer(s, shift) + loggamma(s)[:, None])

    value, _ = simpson_halving(integrand, 0.0, cut, step=step, tol=tol)
    return (-sign * 1j) * value


def _continued_line_parts(z, params: SumParams, step: float, tol: float,
                          t_cut: float | None):
    """Return ``(I1 as mpc list, I2 + varpi12 as complex array)`` for |Im z| < pi."""
    zz, _ = _as_array(z)
    if np.any(np.abs(zz.imag) >= math.pi):
        raise ValueError("continuation needs |Im z| < pi")
    rest = (_gamma_line_integral(zz, params, -1, step, tol, t_cut)
            + _gamma_line_integral(zz, params, +1, step, tol, t_cut))
    entire = [_entire_part_mp(complex(zi), params, _working_dps(params, zi.real)) for zi in zz]
    return entire, rest


def varpi1_continued(z, params: SumParams, step: float = 0.25, tol: float = 1e-9,
                     t_cut: float | None = None):
    """The line integral varpi1 continued to the strip |Im z| < pi."""
    zz, scalar = _as_array(z)
    entire, rest = _continued_line_parts(zz, params, step, tol, t_cut)
    return _unwrap(np.array([complex(e) + r for e, r in zip(entire, rest)]), scalar)


def _varpi_continued_mp(z, params: SumParams, cfg: TruncationConfig):
    """varpi on |Im z| < pi from the continued decomposition, as mpmath values."""
    zz, _ = _as_array(z)
    entire, rest = _continued_line_parts(zz, params, cfg.quad_step, cfg.quad_tol, cfg.t_cut)
    rest = rest + varpi2(zz, params, step=cfg.quad_step / 2, tol=cfg.quad_tol) \
        + varpi3(zz, params, cfg.q_cutoff)
    out = []
    for e, r, zi in zip(entire, rest, zz):
        dps = _working_dps(params, zi.real)
        with mpmath.workdps(dps):
            out.append((e + mpmath.mpc(r.real, r.imag)) / (2j * mpmath.pi))
    return out


def varpi_continued(z, params: SumParams, cfg: TruncationConfig | None = None):
    """varpi(z) for |Im z| < pi (either half-plane) via the continued decomposition."""
    cfg = cfg or TruncationConfig()
    zz, scalar = _as_array(z)
    values = np.array([complex(v) for v in _varpi_continued_mp(zz, params, cfg)])
    return _unwrap(values, scalar)


# -- the A-series -------------------------------------------------------------

def _a_series_mp(z: complex, params: SumParams, dps: int | None = None):
    """-2 sum_{k>=1} (-1)^k (2 pi)^{2k} e^{-2kz} sigma_{1+2k/beta}(n) / ((2k)! zeta(2k+1))."""
    z = complex(z)
    dps = dps or _working_dps(params, z.real)
    with mpmath.workdps(dps):
        two_pi = 2 * mpmath.pi

        def coeff(k2: int):
            k = k2 // 2
            return (-1) ** k * two_pi**k2 / (mpmath.factorial(k2) * _mp_zeta_int(k2 + 1, dps))

        return -2 * _power_series_mp(z, params, dps, coeff, 2, 2)


def a_series(z: complex, params: SumParams, kmax: int | None = None) -> complex:
    """The entire function A_n^(beta)(z) as a single series over zeta(2k+1).

    ``kmax`` truncates the series explicitly; by default terms are summed
    until they are negligible at the working precision.
    """
    z = complex(z)
    if kmax is None:
        return complex(_a_series_mp(z, params))
    dps = _working_dps(params, z.real)
    divs = beta_power_divisors(params)
    with mpmath.workdps(dps):
        w = mpmath.exp(-mpmath.mpc(z.real, z.imag))
        total = mpmath.mpc(0)
        for k in range(1, kmax + 1):
            inner = sum(mpmath.mpf(d) ** params.beta * (2 * mpmath.pi * d * w) ** (2 * k)
                        for d in divs)
            total += (-1) ** k * inner / (mpmath.factorial(2 * k) * _mp_zeta_int(2 * k + 1, dps))
        return complex(-2 * total)


def _a_statement_mp(z: complex, params: SumParams, dps: int | None = None):
    """+2 sum_k (-1)^k (2 pi)^{2k} e^{-2kz} sigma_{1+k/beta}(n) / ((2k)! zeta(1+2k))."""
    z = complex(z)
    dps = dps or _working_dps(params, z.real)
    divs = beta_power_divisors(params)
    with mpmath.workdps(dps):
        w = mpmath.exp(-mpmath.mpc(z.real, z.imag))
        total = mpmath.mpc(0)
        biggest = mpmath.mpf(0)
        floor = mpmath.mpf(10) ** (-(dps - 5))
        peak_k = math.pi * max(divs) * math.exp(-z.real) + 2
        k = 1
        while True:
            inner = sum(mpmath.mpf(d) ** (params.beta + k) for d in divs)
            term = (-1) ** k * (2 * mpmath.pi * w) ** (2 * k) * inner \
                / (mpmath.factorial(2 * k) * _mp_zeta_int(2 * k + 1, dps))
            total += term
            biggest = max(biggest, abs(term))
            if k > peak_k and abs(term) <= floor * max(biggest, 1):
                return 2 * total
            k += 1


def a_series_statement_form(z: complex, params: SumParams) -> complex:
    """The A-series with ``+2`` and ``sigma_{1+k/beta}``, kept for comparison only."""
    return complex(_a_statement_mp(z, params))


def a_series_double_sum(z: complex, params: SumParams, Q: int = 10_000, kmax: int = 40) -> complex:
    """A as ``-sum_q mu(q)/q sum_k [(X/q)^k + (-X/q)^k] sigma_{1+k/beta}(n) / k!``, X = 2 pi i e^{-z}.

    Plain double precision, so only meaningful where ``2 pi n e^{-Re z}`` is small.
    """
    z = complex(z)
    X = 2j * math.pi * cmath.exp(-z)
    divs = beta_power_divisors(params)
    mu = mobius_table(Q)
    q = np.flatnonzero(mu[1:]) + 1
    inner = np.zeros(q.shape, dtype=complex)
    for d in divs:
        u = X * d / q
        acc = np.zeros(q.shape, dtype=complex)
        power = np.ones(q.shape, dtype=complex)
        for k in range(1, kmax + 1):
            power = power * u / k
            if k % 2 == 0:
                acc += 2 * power
        inner += d**params.beta * acc
    return -fsum_complex(mu[q] / q * inner)


# -- functional equation and residues ----------------------------------------

def functional_equation_check(z: complex, params: SumParams, table: ZeroTable,
                              cfg: TruncationConfig | None = None) -> FunctionalEquationCheck:
    """Compare ``varpi(z) + conj(varpi(conj z))`` against both published A-forms.

    ``varpi(z)`` is the zero sum; ``varpi(conj z)`` lies below the real axis
    and comes from the continued decomposition.
    """
    cfg = cfg or TruncationConfig()
    cfg.check_table(len(table))
    z = complex(z)
    if not 0 < z.imag < math.pi:
        raise ValueError("the functional-equation check needs 0 < Im z < pi")
    upper = varpi_zero_sum(z, params, table, cfg.zero_pairs)
    (lower,) = _varpi_continued_mp(np.array([z.conjugate()]), params, cfg)
    dps = _working_dps(params, z.real)
    with mpmath.workdps(dps):
        lhs = mpmath.mpc(upper.real, upper.imag) + mpmath.conj(lower)
        a_der = _a_series_mp(z, params, dps)
        a_stat = _a_statement_mp(z, params, dps)
        return FunctionalEquationCheck(
            z=z, lhs=complex(lhs), a_derived=complex(a_der), a_stated=complex(a_stat),
            residual_derived=complex(lhs - a_der), residual_stated=complex(lhs - a_stat),
        )


def functional_equation_residual(z: complex, params: SumParams, table: ZeroTable,
                                 cfg: TruncationConfig | None = None) -> complex:
    """``varpi(z) + conj(varpi(conj z)) - A(z)`` with A summed over zeta(2k+1)."""
    return functional_equation_check(z, params, table, cfg).residual_derived


def residue_probe(q: int, params: SumParams, eps: float = 1e-3,
                  cfg: TruncationConfig | None = None, points: int = 32) -> complex:
    """Residue of varpi at z = log q from the mean of (z - log q) varpi(z) on a circle.

    The circle straddles the real axis, so varpi is taken from the continued
    decomposition on both halves.
    """
    cfg = cfg or TruncationConfig()
    if not 1e-6 < eps < 1e-2:
        raise ValueError(f"eps must lie in (1e-6, 1e-2), got {eps}")
    if cohen_sum(q, params) == 0:
        raise ValueError(f"c_{q}(n) = 0 for {params}: z = log {q} is not a pole")
    qs, _, logq = _varpi3_terms(params, max(cfg.q_cutoff, q))
    centre = math.log(q)
    clash = (np.abs(logq - centre) <= 2 * eps) & (qs != q)
    if np.any(clash):
        raise ValueError(f"circle of radius {eps} around log {q} reaches log {int(qs[clash][0])}")
    theta = 2 * math.pi * (np.arange(points) + 0.5) / points
    offsets = eps * np.exp(1j * theta)
    values = _varpi_continued_mp(centre + offsets, params, cfg)
    dps = _working_dps(params, centre - eps)
    with mpmath.workdps(dps):
        total = mpmath.fsum(mpmath.mpc(o.real, o.imag) * v for o, v in zip(offsets, values))
        return complex(total / points)

"""Arithmetic functions attached to Cohen's generalized Ramanujan sum.

Everything here is a pure function of its integer arguments. Scalar routines
factor by trial division; the ``*_table`` routines sieve whole ranges with
numpy for the long partial sums used elsewhere in the package.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._numerics import fsum_complex

__all__ = [
    "SumParams",
    "DivisorPowerSum",
    "SummatoryValue",
    "OracleRangeError",
    "factorize",
    "mobius",
    "beta_power_divisors",
    "cohen_sum_direct",
    "cohen_sum",
    "sigma",
    "divisor_power_sum",
    "von_mangoldt",
    "summatory_c",
    "summatory_psi",
    "mobius_table",
    "cohen_sum_table",
    "von_mangoldt_table",
]

DEFAULT_ENUMERATION_BOUND = 10**6


class OracleRangeError(ValueError):
    """The brute-force exponential sum would enumerate too many residues."""


@dataclass(frozen=True)
class SumParams:
    """The fixed argument ``n`` and power parameter ``beta`` of c_q^(beta)(n)."""

    n: int
    beta: int

    def __post_init__(self) -> None:
        for name in ("n", "beta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "beta", int(self.beta))


@dataclass(frozen=True)
class DivisorPowerSum:
    value: complex
    z: complex
    params: SumParams


@dataclass(frozen=True)
class SummatoryValue:
    """A summatory function at ``x`` and its half-jump adjusted value."""

    x: float
    raw: float
    sharp: float


# -- factorization ---------------------------------------------------------

@lru_cache(maxsize=None)
def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as ``((p, e), ...)`` with ascending p."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    limit = 1024
    while limit * limit < n:
        limit *= 4
    out = []
    rest = n
    for p in _small_primes(limit):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out.append((p, e))
    if rest > 1:
        out.append((rest, 1))
    return tuple(out)


def mobius(q: int) -> int:
    """Möbius function of a positive integer."""
    if q < 1:
        raise ValueError(f"mobius needs q >= 1, got {q}")
    fac = factorize(q)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


@lru_cache(maxsize=1024)
def beta_power_divisors(params: SumParams) -> tuple[int, ...]:
    """All ``d >= 1`` with ``d**beta`` dividing ``n``, ascending."""
    n, beta = params.n, params.beta
    out = []
    d = 1
    while d**beta <= n:
        if n % d**beta == 0:
            out.append(d)
        d += 1
    return tuple(out)


# -- the generalized Ramanujan sum ------------------------------------------

def cohen_sum_direct(
    q: int, params: SumParams, *, bound: int = DEFAULT_ENUMERATION_BOUND
) -> complex:
    """Brute-force exponential sum over the admissible residues ``h mod q**beta``.

    ``h`` is admissible when no prime ``p | q`` has ``p**beta | h``; in
    particular ``h = 0`` only counts for ``q = 1``.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    modulus = q**params.beta
    if modulus > bound:
        raise OracleRangeError(f"q**beta = {modulus} exceeds enumeration bound {bound}")
    h = np.arange(modulus, dtype=np.int64)
    keep = np.ones(modulus, dtype=bool)
    for p, _ in factorize(q):
        keep &= h % p**params.beta != 0
    h = h[keep]
    # reduce n*h mod q^beta exactly before forming the phase
    phase = ((params.n % modulus) * h) % modulus
    total = np.exp(2j * np.pi * phase / modulus)
    return complex(math.fsum(total.real.tolist()), math.fsum(total.imag.tolist()))


def cohen_sum(q: int, params: SumParams) -> int:
    """Exact c_q^(beta)(n) from the Möbius expansion over ``d | q, d**beta | n``."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    total = 0
    for d in beta_power_divisors(params):
        if q % d == 0:
            total += mobius(q // d) * d**params.beta
    return total


# -- generalized divisor function ------------------------------------------

def _is_nonneg_int(z: complex) -> bool:
    if isinstance(z, bool):
        return False
    if isinstance(z, (int, np.integer)):
        return z >= 0
    return False


def sigma(z: complex, params: SumParams) -> complex:
    """sigma_z^(beta)(n): the sum of ``d**(beta*z)`` over ``d**beta | n``.

    Nonnegative integer ``z`` is evaluated in exact integer arithmetic and
    returned as ``int``; anything else returns a complex number.
    """
    divs = beta_power_divisors(params)
    if _is_nonneg_int(z):
        return sum(d ** (params.beta * int(z)) for d in divs)
    bz = params.beta * complex(z)
    return fsum_complex(cmath.exp(bz * math.log(d)) for d in divs)


def divisor_power_sum(z: complex, params: SumParams) -> DivisorPowerSum:
    return DivisorPowerSum(value=complex(sigma(z, params)), z=complex(z), params=params)


def sigma_at(s: np.ndarray, params: SumParams, shift: float = 0.0) -> np.ndarray:
    """Vectorized ``sum_d d**(beta*shift) * d**(-s)`` over ``d**beta | n``.

    With ``shift = 1`` this is sigma_{1 - s/beta}^(beta)(n), the numerator
    shared by every explicit formula in the package.
    """
    s = np.asarray(s, dtype=complex)
    out = np.zeros(s.shape, dtype=complex)
    for d in beta_power_divisors(params):
        if d == 1:
            out += 1.0
        else:
            out += np.exp((params.beta * shift - s) * math.log(d))
    return out


# -- generalized von Mangoldt / Chebyshev ----------------------------------

def von_mangoldt(j: int, m: int, beta: int) -> float:
    """Lambda_{1,m}^(beta)(j) = sum over d*delta = j of c_d^(beta)(m) log(delta)."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    params = SumParams(m, beta)
    terms = []
    for d in _divisors(j):
        c = cohen_sum(d, params)
        if c and d != j:
            terms.append(c * math.log(j // d))
    return math.fsum(terms)


def _as_integer(x: float) -> int | None:
    r = round(x)
    return int(r) if r == x else None


def summatory_c(x: float, params: SumParams) -> SummatoryValue:
    """Partial sum of c_q^(beta)(n) over q <= x, with the half-jump variant."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    top = math.floor(x)
    raw = int(cohen_sum_table(top, params)[1:].sum())
    xi = _as_integer(x)
    sharp = raw - 0.5 * cohen_sum(xi, params) if xi is not None else float(raw)
    return SummatoryValue(x=float(x), raw=raw, sharp=sharp)


def summatory_psi(x: float, m: int, beta: int) -> SummatoryValue:
    """Generalized Chebyshev function psi_m^(beta)(x) and its half-jump variant."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    top = math.floor(x)
    values = von_mangoldt_table(top, m, beta)
    raw = math.fsum(values[1:].tolist())
    xi = _as_integer(x)
    sharp = raw - 0.5 * values[xi] if xi is not None else raw
    return SummatoryValue(x=float(x), raw=raw, sharp=sharp)


# -- sieved tables ---------------------------------------------------------

@lru_cache(maxsize=8)
def _mobius_table_cached(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if not is_prime[p]:
            continue
        is_prime[p * p :: p] = False
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return mu


def mobius_table(limit: int) -> np.ndarray:
    """``mu[q]`` for ``0 <= q <= limit`` (entry 0 is unused and set to 0)."""
    return _mobius_table_cached(max(int(limit), 1))


def cohen_sum_table(qmax: int, params: SumParams) -> np.ndarray:
    """``c[q] = c_q^(beta)(n)`` for ``0 <= q <= qmax`` as exact int64 (``c[0] = 0``)."""
    qmax = int(qmax)
    mu = mobius_table(qmax)
    out = np.zeros(qmax + 1, dtype=np.int64)
    for d in beta_power_divisors(params):
        if d > qmax:
            break
        count = qmax // d
        out[d::d][:count] += d**params.beta * mu[1 : count + 1].astype(np.int64)
    return out


def von_mangoldt_table(jmax: int, m: int, beta: int) -> np.ndarray:
    """``L[j] = Lambda_{1,m}^(beta)(j)`` for ``0 <= j <= jmax`` (``L[0] = 0``)."""
    jmax = int(jmax)
    c = cohen_sum_table(jmax, SumParams(m, beta))
    logs = np.log(np.arange(1, jmax + 1, dtype=float))
    out = np.zeros(jmax + 1)
    for d in np.flatnonzero(c):
        count = jmax // d
        out[d::d][:count] += c[d] * logs[:count]
    return out

"""Reference implementations written independently of the package code.

Nothing here imports from ``ramsum``: each function follows the textbook
definition as literally as practical, trading speed for transparency.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np


def has_beta_power_factor(g: int, beta: int) -> bool:
    """True when some d > 1 has d**beta | g (g > 0)."""
    d = 2
    while d**beta <= g:
        if g % d**beta == 0:
            return True
        d += 1
    return False


def cohen_by_definition(q: int, n: int, beta: int) -> complex:
    """Exponential sum over h in [1, q^beta] with (h, q^beta)_beta = 1.

    Ranging over 1..q^beta instead of 0..q^beta-1 sidesteps the h = 0 question:
    h = q^beta is admissible only when q = 1, matching the package convention.
    """
    mod = q**beta
    total = 0j
    for h in range(1, mod + 1):
        if not has_beta_power_factor(math.gcd(h, mod), beta):
            total += complex(math.cos(2 * math.pi * n * h / mod), math.sin(2 * math.pi * n * h / mod))
    return total


def sigma_brute(z: complex, n: int, beta: int) -> complex:
    return sum(complex(d) ** (beta * z) for d in range(1, n + 1) if n % d**beta == 0)


def mobius_brute(q: int) -> int:
    result, m, p = 1, q, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def classical_lambda_table(jmax: int) -> np.ndarray:
    """Classical von Mangoldt Lambda(j) from an explicit list of prime powers."""
    out = np.zeros(jmax + 1)
    sieve = np.ones(jmax + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, jmax + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
            pk = p
            while pk <= jmax:
                out[pk] = math.log(p)
                pk *= p
    return out


def chebyshev_psi(x: float) -> float:
    return math.fsum(classical_lambda_table(int(math.floor(x))).tolist())


def classical_psi_formula(x: float, ordinates) -> float:
    """x - sum 2 Re(x^rho/rho) - log 2 pi - log(1 - x^-2)/2, in mpmath."""
    with mpmath.workdps(30):
        xm = mpmath.mpf(x)
        zs = mpmath.fsum(2 * mpmath.re(xm ** mpmath.mpc(0.5, g) / mpmath.mpc(0.5, g)) for g in ordinates)
        return float(xm - zs - mpmath.log(2 * mpmath.pi) - mpmath.log(1 - xm**-2) / 2)


def zeta_mp(s: complex) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


def a_closed_form(z: complex, n: int, beta: int, qmax: int = 3000) -> complex:
    """A(z) = -2 sum_q mu(q)/q sum_{d^beta | n} d^beta (cos(2 pi d e^{-z}/q) - 1).

    Obtained by summing the inner k-series of the double-sum form in closed
    form (e^u + e^-u - 2 = 2 cosh u - 2). The q-tail is O(1/qmax^2).
    """
    w = complex(mpmath.exp(-mpmath.mpc(z.real, z.imag)))
    divs = [d for d in range(1, n + 1) if n % d**beta == 0]
    total = 0j
    for q in range(1, qmax + 1):
        mu = mobius_brute(q)
        if mu:
            inner = sum(d**beta * (complex(mpmath.cos(2 * mpmath.pi * d * w / q)) - 1) for d in divs)
            total += mu / q * inner
    return -2 * total

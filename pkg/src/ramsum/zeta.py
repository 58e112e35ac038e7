"""Riemann zeta on a desk-scale domain, plus the table of its critical zeros.

zeta and zeta' are evaluated by Euler-Maclaurin summation (vectorized over
arrays of ``s``), with the functional equation taking over left of
Re s = -1/2. Zero ordinates ship as a plain-text table that is re-verified
and Newton-refined every time it is loaded.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import bernoulli, loggamma

__all__ = [
    "EvalAccuracy",
    "ZeroTable",
    "ZetaPoleError",
    "NonConvergenceError",
    "ZeroTableError",
    "zeta_eval",
    "zeta_prime",
    "zeta_odd",
    "hardy_z",
    "refine_zero",
    "parse_zero_text",
    "dump_zero_table",
    "load_zero_table",
    "bundled_zero_table",
    "BUNDLED_TABLE_NAME",
    "TABLE_ENV_VAR",
]

BUNDLED_TABLE_NAME = "zeros100.txt"
TABLE_ENV_VAR = "RAMSUM_ZERO_TABLE"

_POLE_RADIUS = 1e-12
_REFLECT_BELOW = -0.5
_CHUNK = 256


class ZetaPoleError(ZeroDivisionError):
    """Evaluation requested within 1e-12 of the pole at s = 1."""


class NonConvergenceError(ArithmeticError):
    """Newton refinement of a zero did not converge."""


class ZeroTableError(ValueError):
    """A zero-table file is malformed or fails verification."""


@dataclass(frozen=True)
class EvalAccuracy:
    """Euler-Maclaurin parameters.

    ``em_terms=None`` picks ``max(20, 2|Im s|)`` per batch.
    """

    em_terms: int | None = None
    bernoulli_terms: int = 12
    target_abs_err: float = 1e-10

    def __post_init__(self) -> None:
        if self.em_terms is not None and self.em_terms < 10:
            raise ValueError(f"em_terms must be >= 10, got {self.em_terms}")
        if not 2 <= self.bernoulli_terms <= 30:
            raise ValueError(f"bernoulli_terms must lie in [2, 30], got {self.bernoulli_terms}")

    def terms_for(self, s: np.ndarray) -> int:
        if self.em_terms is not None:
            return self.em_terms
        tmax = float(np.max(np.abs(s.imag))) if s.size else 0.0
        return max(20, int(math.ceil(2 * tmax)))


DEFAULT_ACCURACY = EvalAccuracy()


@lru_cache(maxsize=None)
def _bernoulli_coeffs(m: int) -> np.ndarray:
    """``B_{2k} / (2k)!`` for ``k = 1..m``."""
    b = bernoulli(2 * m)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(1, m + 1)])


def _em_chunk(s: np.ndarray, acc: EvalAccuracy, derivative: bool) -> np.ndarray:
    N = acc.terms_for(s)
    m = acc.bernoulli_terms
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    powers = np.exp(-np.outer(s, logn))
    logN = math.log(N)
    NmS = np.exp(-s * logN)          # N^{-s}
    coeffs = _bernoulli_coeffs(m)
    if not derivative:
        head = powers.sum(axis=1)
        tail = N * NmS / (s - 1) + 0.5 * NmS
        poly = s.copy()               # s(s+1)...(s+2k-2)
        corr = np.zeros_like(s)
        scale = NmS / N               # N^{-s-2k+1} for k = 1
        for k in range(1, m + 1):
            corr += coeffs[k - 1] * poly * scale
            poly = poly * (s + 2 * k - 1) * (s + 2 * k)
            scale = scale / (N * N)
        return head + tail + corr
    head = -(powers * logn).sum(axis=1)
    tail = (-logN * N * NmS / (s - 1) - N * NmS / (s - 1) ** 2
            - 0.5 * logN * NmS)
    poly = s.copy()
    dpoly = np.ones_like(s)
    corr = np.zeros_like(s)
    scale = NmS / N
    for k in range(1, m + 1):
        corr += coeffs[k - 1] * (dpoly - logN * poly) * scale
        for j in (2 * k - 1, 2 * k):
            dpoly = dpoly * (s + j) + poly
            poly = poly * (s + j)
        scale = scale / (N * N)
    return head + tail + corr


def _chi(s: np.ndarray) -> np.ndarray:
    """zeta(s) = chi(s) zeta(1 - s)."""
    return np.exp(s * math.log(2.0) + (s - 1) * math.log(math.pi) + loggamma(1 - s)) \
        * np.sin(np.pi * s / 2)


def _chi_prime(s: np.ndarray) -> np.ndarray:
    from scipy.special import digamma

    base = np.exp(s * math.log(2.0) + (s - 1) * math.log(math.pi) + loggamma(1 - s))
    return base * ((math.log(2 * math.pi) - digamma(1 - s)) * np.sin(np.pi * s / 2)
                   + 0.5 * np.pi * np.cos(np.pi * s / 2))


def _evaluate(s, acc: EvalAccuracy | None, derivative: bool):
    acc = acc or DEFAULT_ACCURACY
    scalar = np.ndim(s) == 0
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(np.abs(arr - 1) < _POLE_RADIUS):
        raise ZetaPoleError("zeta has a pole at s = 1")
    out = np.empty_like(arr)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    left = flat_in.real < _REFLECT_BELOW
    direct = np.flatnonzero(~left)
    for start in range(0, direct.size, _CHUNK):
        idx = direct[start : start + _CHUNK]
        flat_out[idx] = _em_chunk(flat_in[idx], acc, derivative)
    refl = np.flatnonzero(left)
    if refl.size:
        s_l = flat_in[refl]
        mirror = 1 - s_l
        z1 = np.concatenate([_em_chunk(mirror[i : i + _CHUNK], acc, False)
                             for i in range(0, mirror.size, _CHUNK)])
        if not derivative:
            flat_out[refl] = _chi(s_l) * z1
        else:
            dz1 = np.concatenate([_em_chunk(mirror[i : i + _CHUNK], acc, True)
                                  for i in range(0, mirror.size, _CHUNK)])
            flat_out[refl] = _chi_prime(s_l) * z1 - _chi(s_l) * dz1
    out = flat_out.reshape(arr.shape)
    return complex(out[0]) if scalar else out


def zeta_eval(s, acc: EvalAccuracy | None = None):
    """Riemann zeta at a complex scalar or array ``s``."""
    return _evaluate(s, acc, derivative=False)


def zeta_prime(s, acc: EvalAccuracy | None = None):
    """Derivative of zeta, by term-wise differentiated Euler-Maclaurin."""
    return _evaluate(s, acc, derivative=True)


@lru_cache(maxsize=None)
def zeta_odd(k: int) -> float:
    """zeta(2k + 1) by direct summation with a midpoint-integral tail."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    p = 2 * k + 1
    # midpoint tail error ~ p/24 N^{-p-1}; pick N so it is far below 1e-13
    N = 2
    while p / 24.0 * N ** (-p - 1.0) > 1e-15:
        N *= 2
    head = math.fsum(n ** (-float(p)) for n in range(1, N + 1))
    tail = (N + 0.5) ** (1.0 - p) / (p - 1)
    return head + tail


def hardy_z(t, acc: EvalAccuracy | None = None):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t."""
    t_arr = np.asarray(t, dtype=float)
    theta = np.imag(loggamma(0.25 + 0.5j * t_arr)) - 0.5 * t_arr * math.log(math.pi)
    val = np.exp(1j * theta) * zeta_eval(0.5 + 1j * t_arr, acc)
    return float(np.real(val)) if np.ndim(t) == 0 else np.real(val)


def refine_zero(gamma0: float, acc: EvalAccuracy | None = None, *,
                target: float = 1e-10, max_iter: int = 30,
                max_drift: float = 0.1) -> float:
    """Newton-refine an ordinate ``gamma0`` of a zero on the critical line.

    Raises:
        NonConvergenceError: if the iteration wanders more than ``max_drift``
            from the seed or does not reach ``|zeta| < target``.
    """
    t = float(gamma0)
    for _ in range(max_iter + 1):
        s = 0.5 + 1j * t
        z = zeta_eval(s, acc)
        if abs(z) < target:
            return t
        dz = 1j * zeta_prime(s, acc)
        if dz == 0:
            break
        t -= (z / dz).real
        if not math.isfinite(t) or abs(t - gamma0) > max_drift:
            raise NonConvergenceError(
                f"Newton from {gamma0} drifted to {t}; no zero within {max_drift}")
    raise NonConvergenceError(f"no convergence from {gamma0} in {max_iter} iterations")


@dataclass(frozen=True)
class ZeroTable:
    """Verified ordinates gamma_k > 0 with zeta'(1/2 + i gamma_k) cached."""

    ordinates: tuple[float, ...]
    zeta_prime_at: tuple[complex, ...]
    source: str = "<memory>"
    _rho: np.ndarray = field(init=False, repr=False, compare=False)
    _dzeta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.ordinates:
            raise ZeroTableError("zero table is empty")
        if len(self.ordinates) != len(self.zeta_prime_at):
            raise ZeroTableError("ordinates and zeta' values are misaligned")
        g = np.asarray(self.ordinates, dtype=float)
        if g[0] <= 0 or np.any(np.diff(g) <= 0):
            raise ZeroTableError("ordinates must be positive and strictly ascending")
        if any(v == 0 for v in self.zeta_prime_at):
            raise ZeroTableError("zeta' vanishes at a tabulated zero (not simple)")
        rho = 0.5 + 1j * g
        dz = np.asarray(self.zeta_prime_at, dtype=complex)
        rho.setflags(write=False)
        dz.setflags(write=False)
        object.__setattr__(self, "_rho", rho)
        object.__setattr__(self, "_dzeta", dz)

    def __len__(self) -> int:
        return len(self.ordinates)

    def rho(self, count: int | None = None) -> np.ndarray:
        return self._rho[: self._check(count)]

    def dzeta(self, count: int | None = None) -> np.ndarray:
        return self._dzeta[: self._check(count)]

    def _check(self, count: int | None) -> int:
        if count is None:
            return len(self)
        if count < 0 or count > len(self):
            raise ValueError(f"requested {count} zeros but the table holds {len(self)}")
        return count

    def truncation_height(self, pairs: int) -> float:
        """Height T between the last used ordinate and the next one.

        Past the end of the table the last gap is reused.
        """
        self._check(pairs)
        g = self.ordinates
        if pairs == 0:
            return g[0] / 2
        if pairs < len(g):
            return 0.5 * (g[pairs - 1] + g[pairs])
        last_gap = g[-1] - g[-2] if len(g) > 1 else g[-1]
        return g[-1] + 0.5 * last_gap


def parse_zero_text(text: str) -> list[float]:
    """Parse the zero-table format: one decimal per line, '#' comments allowed."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            value = float(stripped)
        except ValueError:
            raise ZeroTableError(f"line {lineno}: cannot parse {stripped!r}") from None
        if not math.isfinite(value) or value <= 0:
            raise ZeroTableError(f"line {lineno}: ordinate must be positive, got {stripped!r}")
        if out and value <= out[-1]:
            raise ZeroTableError(
                f"line {lineno}: ordinates must ascend ({value!r} after {out[-1]!r})")
        out.append(value)
    if not out:
        raise ZeroTableError("zero table is empty")
    return out


def dump_zero_table(table: ZeroTable | list[float], header: str | None = None) -> str:
    """Serialize ordinates with shortest round-trip repr (parses back bit-exactly)."""
    ordinates = table.ordinates if isinstance(table, ZeroTable) else table
    lines = [f"# {h}" for h in (header.splitlines() if header else [])]
    lines += [repr(float(g)) for g in ordinates]
    return "\n".join(lines) + "\n"


def build_zero_table(ordinates: list[float], *, source: str = "<memory>",
                     acc: EvalAccuracy | None = None, tol: float = 1e-8,
                     refine: bool = True) -> ZeroTable:
    """Refine, verify and attach zeta' to a list of ordinates."""
    refined = []
    for k, g in enumerate(ordinates, start=1):
        if refine:
            try:
                g = refine_zero(g, acc)
            except NonConvergenceError as exc:
                raise ZeroTableError(f"entry {k} ({g!r}): {exc}") from None
        refined.append(g)
    g_arr = np.asarray(refined)
    s = 0.5 + 1j * g_arr
    residual = np.abs(zeta_eval(s, acc))
    bad = np.flatnonzero(residual >= tol)
    if bad.size:
        k = int(bad[0])
        raise ZeroTableError(
            f"entry {k + 1} ({refined[k]!r}) fails verification: |zeta| = {residual[k]:.3g}")
    if np.any(np.diff(g_arr) <= 0):
        raise ZeroTableError("refinement merged or reordered ordinates")
    dz = zeta_prime(s, acc)
    return ZeroTable(tuple(float(v) for v in g_arr), tuple(complex(v) for v in dz), source)


def load_zero_table(path: str | os.PathLike | None = None, *,
                    acc: EvalAccuracy | None = None, tol: float = 1e-8) -> ZeroTable:
    """Load, refine and verify a zero table; ``None`` means the bundled one."""
    if path is None or str(path) == "bundled":
        return bundled_zero_table()
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table {p}: {exc}") from None
    return build_zero_table(parse_zero_text(text), source=str(p), acc=acc, tol=tol)


@lru_cache(maxsize=1)
def bundled_zero_table() -> ZeroTable:
    text = resources.files("ramsum.data").joinpath(BUNDLED_TABLE_NAME).read_text("utf-8")
    return build_zero_table(parse_zero_text(text), source=f"bundled:{BUNDLED_TABLE_NAME}")

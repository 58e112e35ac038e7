"""Deterministic reductions and quadrature shared by the evaluators."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence

import numpy as np


class QuadratureError(ArithmeticError):
    """Raised when a quadrature cannot reach its tolerance."""


def fsum_complex(values: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex values (real and imaginary parts separately)."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=complex)
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def segmented_prefix_sums(values: np.ndarray, cutoffs: Sequence[int]) -> list[complex]:
    """Partial sums ``sum(values[:Q])`` for each ascending cutoff ``Q``.

    Each segment between consecutive cutoffs is reduced with ``fsum`` and the
    segments are accumulated in ascending order, so the result does not depend
    on how the work is chunked.
    """
    out: list[complex] = []
    total = 0j
    prev = 0
    for q in cutoffs:
        if q < prev:
            raise ValueError("cutoffs must be ascending")
        total += fsum_complex(values[prev:q])
        out.append(total)
        prev = q
    return out


def simpson_halving(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    step: float,
    tol: float = 1e-9,
    max_halvings: int = 16,
) -> tuple[np.ndarray, float]:
    """Composite Simpson rule on ``[a, b]`` with repeated step halving.

    ``f`` maps a 1-D array of nodes to an array whose first axis runs over the
    nodes (extra trailing axes are integrated independently). Halving stops
    once successive estimates differ by less than ``tol`` in every component;
    the returned value carries the Richardson correction ``(S_h - S_2h)/15``.

    Returns:
        ``(integral, error_estimate)``.
    """
    if b == a:
        probe = np.asarray(f(np.array([a])))
        return np.zeros(probe.shape[1:], dtype=complex), 0.0
    n = max(2, int(math.ceil(abs(b - a) / step)))
    n += n % 2
    x = np.linspace(a, b, n + 1)
    fx = np.asarray(f(x), dtype=complex)

    def simpson(values: np.ndarray, h: float) -> np.ndarray:
        w = np.ones(values.shape[0])
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return np.tensordot(w, values, axes=(0, 0)) * (h / 3.0)

    h = (b - a) / n
    prev = simpson(fx, h)
    for _ in range(max_halvings):
        mid = x[:-1] + 0.5 * (x[1:] - x[:-1])
        fm = np.asarray(f(mid), dtype=complex)
        merged_x = np.empty(2 * len(x) - 1)
        merged_x[0::2] = x
        merged_x[1::2] = mid
        merged_f = np.empty((merged_x.shape[0],) + fx.shape[1:], dtype=complex)
        merged_f[0::2] = fx
        merged_f[1::2] = fm
        x, fx = merged_x, merged_f
        h /= 2.0
        cur = simpson(fx, h)
        err = float(np.max(np.abs(cur - prev)))
        if err < tol:
            return cur + (cur - prev) / 15.0, err / 15.0
        prev = cur
    raise QuadratureError(
        f"Simpson halving did not reach tol={tol:g} on [{a}, {b}] (last change {err:.3g})"
    )

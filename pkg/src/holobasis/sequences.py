"""Flat unimodular sequences: Rudin-Shapiro signs and the sqrt(2) quadratic phase."""

from __future__ import annotations

import math

import numpy as np
from scipy import fft as sfft
from scipy.optimize import minimize_scalar

from holobasis.errors import DomainError

# frac(sqrt 2) as a 128-bit binary fraction, split into two 64-bit words.
_SQRT2_FRAC_128 = math.isqrt(2 << 256) - (1 << 128)
_SQRT2_HI = np.uint64(_SQRT2_FRAC_128 >> 64)
_SQRT2_LO_SCALED = (_SQRT2_FRAC_128 & ((1 << 64) - 1)) / 2.0**128
_TWO64 = 2.0**64


def rudin_shapiro(j):
    """sigma_j = (-1)^(number of adjacent '11' pairs in the binary digits of j)."""
    arr = np.asarray(j)
    if np.any(arr < 0):
        raise DomainError("Rudin-Shapiro index must be nonnegative")
    a = arr.astype(np.int64)
    pairs = a & (a >> 1)
    parity = np.zeros_like(a)
    while np.any(pairs):
        parity ^= pairs & 1
        pairs = pairs >> 1
    out = 1 - 2 * parity
    return int(out) if out.ndim == 0 else out


def frac_sqrt2_times(n) -> np.ndarray:
    """frac(sqrt(2) * n) for nonnegative integers n < 2^63, accurate to ~1e-16.

    The product is reduced modulo 1 in 128-bit fixed point: the high word
    multiplies with uint64 wraparound (exactly mod 1), the low word only
    contributes a tiny correction that is safe in binary64.
    """
    n = np.asarray(n)
    if n.dtype.kind not in "iu":
        raise DomainError("frac_sqrt2_times needs integer input")
    if np.any(n < 0):
        raise DomainError("frac_sqrt2_times needs nonnegative input")
    nu = n.astype(np.uint64)
    with np.errstate(over="ignore"):
        hi = nu * _SQRT2_HI
    out = hi.astype(np.float64) / _TWO64 + nu.astype(np.float64) * _SQRT2_LO_SCALED
    out -= np.floor(out)
    return out


def quadratic_phase_turns(k1, k2) -> np.ndarray:
    """Phase of u_k in turns, reduced to [0, 1)."""
    a = np.asarray(k1, dtype=np.int64)
    b = np.asarray(k2, dtype=np.int64)
    return frac_sqrt2_times(a * a + b * b)


def quadratic_phase(k1, k2):
    """u_k = e(sqrt(2) (k1^2 + k2^2)) with e(x) = exp(2 pi i x)."""
    out = np.exp(2j * np.pi * quadratic_phase_turns(k1, k2))
    return complex(out) if out.ndim == 0 else out


def flatness_ratio(a: int, b: int, grid_size: int | None = None, refine: bool = True) -> float:
    """max_theta |sum_{a <= j < b} sigma_j e(j theta)| / sqrt(b - a).

    Evaluated on a theta-grid (at least 4x oversampled) and then polished by
    a bounded scalar search around the best grid point, so the result is a
    lower bound for the true supremum that is typically tight to ~1e-6.
    """
    if not (b > a >= 0):
        raise DomainError("need b > a >= 0")
    n = b - a
    if grid_size is None:
        grid_size = sfft.next_fast_len(4 * n)
    if grid_size < 4 * n:
        raise DomainError("theta-grid must oversample the sequence at least 4x")
    signs = rudin_shapiro(np.arange(a, b)).astype(np.float64)
    # the shift by a only multiplies by a unimodular factor
    values = np.abs(sfft.fft(signs, n=grid_size))
    best = int(np.argmax(values))
    peak = float(values[best])
    if refine and n > 1:
        j = np.arange(n)

        def neg(theta):
            return -abs(np.sum(signs * np.exp(-2j * np.pi * j * theta)))

        h = 1.0 / grid_size
        res = minimize_scalar(neg, bounds=(best * h - h, best * h + h), method="bounded",
                              options={"xatol": 1e-10})
        peak = max(peak, -float(res.fun))
    return peak / math.sqrt(n)


def diophantine_min(limit: int) -> tuple[float, int]:
    """min over 1 <= x <= limit of x * ||x sqrt 2|| and the minimizing x."""
    if limit < 1:
        raise DomainError("limit must be >= 1")
    x = np.arange(1, limit + 1, dtype=np.int64)
    f = frac_sqrt2_times(x)
    vals = x * np.minimum(f, 1.0 - f)
    i = int(np.argmin(vals))
    return float(vals[i]), int(x[i])


def sqrt2_convergents(count: int) -> list[tuple[int, int]]:
    """First ``count`` continued-fraction convergents p/q of sqrt 2 = [1; 2, 2, ...]."""
    out = []
    p0, q0, p1, q1 = 1, 0, 1, 1
    for _ in range(count):
        out.append((p1, q1))
        p0, q0, p1, q1 = p1, q1, 2 * p1 + p0, 2 * q1 + q0
    return out

"""Mollified two-dimensional quadratic Weyl sums.

    S(psi) = sum_k rho((k1 - c1)/M1) rho((k2 - c2)/M2) e(k . psi) w_k

with w_k = u_k = e(sqrt 2 (k1^2 + k2^2)) ("plain") or w_k = u_{k1, N-k1-k2}
("reflected").  Because sqrt 2 is badly approximable, max_psi |S| stays of
order sqrt(M1 M2); ``scaling_fit`` measures that exponent.

max_psi |S| is computed on the full oversampled psi-torus by a 2-D FFT of
the windowed weights (S is a trigonometric polynomial in psi), then polished
by direct evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft as sfft
from scipy.optimize import minimize

from holobasis.errors import DomainError
from holobasis.sequences import frac_sqrt2_times

VARIANTS = ("plain", "reflected")


def bump(x):
    """rho(x) = exp(1 - 1/(1 - x^2)) on (-1, 1), zero outside; rho(0) = 1."""
    x = np.asarray(x, dtype=np.float64)
    inside = np.abs(x) < 1.0
    out = np.zeros_like(x)
    xi = x[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi * xi))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SumSpec:
    M1: int
    M2: int
    c1: int = 0
    c2: int = 0
    psi1: float = 0.0
    psi2: float = 0.0
    N: int = 0
    variant: str = "plain"

    def __post_init__(self):
        if self.M1 < 1 or self.M2 < 1:
            raise DomainError("window sizes must be >= 1")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")

    def ranges(self) -> tuple[np.ndarray, np.ndarray]:
        k1 = np.arange(self.c1 - self.M1 + 1, self.c1 + self.M1, dtype=np.int64)
        k2 = np.arange(self.c2 - self.M2 + 1, self.c2 + self.M2, dtype=np.int64)
        return k1, k2


def quadratic_weights(spec: SumSpec, k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    """w_k on the grid k1 x k2 (outer product shape)."""
    a = k1[:, None]
    b = k2[None, :] if spec.variant == "plain" else spec.N - k1[:, None] - k2[None, :]
    n = a * a + b * b
    return np.exp(2j * np.pi * frac_sqrt2_times(n))


def unit_weights(spec: SumSpec, k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    """The no-cancellation baseline w_k = 1."""
    return np.ones((k1.size, k2.size), dtype=complex)


def _window(spec: SumSpec, weights=None):
    k1, k2 = spec.ranges()
    fn = quadratic_weights if weights is None else weights
    r1 = bump((k1 - spec.c1) / spec.M1)
    r2 = bump((k2 - spec.c2) / spec.M2)
    W = fn(spec, k1, k2) * np.outer(r1, r2)
    return k1, k2, W


def _eval(W: np.ndarray, psi1: float, psi2: float) -> complex:
    # local frequencies only; the dropped global phase does not affect |S|
    e1 = np.exp(2j * np.pi * np.arange(W.shape[0]) * psi1)
    e2 = np.exp(2j * np.pi * np.arange(W.shape[1]) * psi2)
    return complex(e1 @ (W @ e2))


def mollified_sum(spec: SumSpec, weights=None) -> complex:
    """S at the phases stored in ``spec``; ``weights`` replaces w_k (test hook)."""
    k1, k2, W = _window(spec, weights)
    lead = np.exp(2j * np.pi * (math.fmod(k1[0] * spec.psi1, 1.0) + math.fmod(k2[0] * spec.psi2, 1.0)))
    return complex(lead * _eval(W, spec.psi1, spec.psi2))


def max_over_psi(spec: SumSpec, weights=None, oversample: int = 2, polish: bool = True):
    """max over psi of |S|, returned with the maximizing (psi1, psi2)."""
    _, _, W = _window(spec, weights)
    Ls = tuple(sfft.next_fast_len(oversample * n) for n in W.shape)
    F = np.abs(sfft.ifft2(W.astype(np.complex64), s=Ls)) * float(Ls[0] * Ls[1])
    i, j = np.unravel_index(int(np.argmax(F)), F.shape)
    psi = np.array([i / Ls[0], j / Ls[1]])
    best = abs(_eval(W, *psi))
    if polish:
        h = 0.5 / max(Ls)
        res = minimize(lambda p: -abs(_eval(W, p[0], p[1])), psi, method="Nelder-Mead",
                       options={"initial_simplex": [psi, psi + [h, 0], psi + [0, h]],
                                "xatol": 1e-12, "fatol": 1e-10, "maxiter": 400})
        if -res.fun > best:
            best, psi = -float(res.fun), res.x
    return best, (float(psi[0] % 1.0), float(psi[1] % 1.0))


@dataclass
class ScalingFit:
    exponent: float
    constant: float
    sizes: list[int]
    maxima: list[float]

    def __iter__(self):
        return iter((self.exponent, self.constant))


def fit_loglog(sizes, values) -> tuple[float, float]:
    """Least-squares slope and intercept of log(values) against log(sizes)."""
    if len(set(sizes)) < 2:
        raise DomainError("need at least two distinct sizes for a fit")
    slope, intercept = np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(values, float)), 1)
    return float(slope), float(intercept)


def scaling_fit(sizes, trials: int, seed: int, variant: str = "plain", N: int = 10**6,
                weights=None, maximize: bool = True, center_range: tuple[int, int] = (0, 10**6),
                oversample: int = 2) -> ScalingFit:
    """Fit log max|S| against log M over square windows M1 = M2 = M.

    For each M the maximum is taken over ``trials`` random centers (each
    trial seeded from (seed, M, trial)) and, if ``maximize``, over psi.
    With ``maximize=False`` the sum is taken at psi = 0.
    """
    sizes = [int(M) for M in sizes]
    if len(set(sizes)) < 2:
        raise DomainError("need at least two distinct sizes for a fit")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    maxima = []
    for M in sizes:
        best = 0.0
        for t in range(trials):
            rng = np.random.default_rng((seed, M, t))
            c1, c2 = (int(c) for c in rng.integers(center_range[0], center_range[1] + 1, size=2))
            spec = SumSpec(M, M, c1, c2, N=N, variant=variant)
            if maximize:
                v, _ = max_over_psi(spec, weights, oversample)
            else:
                v = abs(mollified_sum(replace(spec, psi1=0.0, psi2=0.0), weights))
            best = max(best, v)
        maxima.append(best)
    slope, intercept = fit_loglog(sizes, maxima)
    return ScalingFit(slope, math.exp(intercept), sizes, maxima)

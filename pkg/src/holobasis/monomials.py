"""L^2 geometry of the normalized monomial frame on the unit sphere of C^d.

Monomials are orthogonal on the sphere with

    ||z^alpha||^2 = (d-1)! alpha_1! ... alpha_d! / (d - 1 + |alpha|)!,

so a polynomial written in the normalized frame e_alpha = z^alpha / ||z^alpha||
has its L^2 norm and inner products given exactly by its coefficient vector.
Everything here works in log-space to survive large degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from holobasis.errors import DomainError
from holobasis.geometry import dimension, flat_index, triangle_points


def monomial_norm_sq(alpha, d: int | None = None) -> float:
    """Squared L^2(sphere) norm of z^alpha, alpha given with all d entries."""
    alpha = [int(a) for a in alpha]
    if d is None:
        d = len(alpha)
    if len(alpha) != d or any(a < 0 for a in alpha):
        raise DomainError("alpha must have d nonnegative entries")
    log = math.lgamma(d) + sum(math.lgamma(a + 1) for a in alpha) - math.lgamma(d + sum(alpha))
    return math.exp(log)


def monomial_norm_sq_exact(alpha) -> Fraction:
    """Same quantity as an exact rational (big-integer factorials)."""
    d = len(alpha)
    num = math.factorial(d - 1)
    for a in alpha:
        num *= math.factorial(int(a))
    return Fraction(num, math.factorial(d - 1 + sum(int(a) for a in alpha)))


@lru_cache(maxsize=64)
def _exponents(N: int, d: int) -> np.ndarray:
    if d == 2:
        j = np.arange(N + 1)
        out = np.stack([j, N - j], axis=1)
    elif d == 3:
        pts = triangle_points(N)
        out = np.column_stack([pts, N - pts.sum(axis=1)])
    else:
        raise DomainError(f"dimension must be 2 or 3, got {d}")
    out.setflags(write=False)
    return out


def exponents(N: int, d: int = 3) -> np.ndarray:
    """Full exponent vectors of the frame in canonical order, shape (dim, d).

    d=3: (j1, j2, N - j1 - j2) in the triangle order; d=2: (j, N - j), j = 0..N.
    """
    return _exponents(int(N), int(d))


@lru_cache(maxsize=64)
def _log_norm_sq(N: int, d: int) -> np.ndarray:
    ex = _exponents(N, d)
    out = math.lgamma(d) + gammaln(ex + 1.0).sum(axis=1) - math.lgamma(d + N)
    out.setflags(write=False)
    return out


def log_norm_sq(N: int, d: int = 3) -> np.ndarray:
    return _log_norm_sq(int(N), int(d))


def _xlogy_rows(ex: np.ndarray, logs: np.ndarray, zero: np.ndarray) -> np.ndarray:
    """sum_i ex[:, i] * logs[..., i] with 0 * log 0 = 0 and a * log 0 = -inf."""
    safe = np.where(zero, 0.0, logs)
    out = safe @ ex.T.astype(np.float64)
    killed = zero.astype(np.float64) @ (ex.T > 0).astype(np.float64)
    return np.where(killed > 0, -np.inf, out)


def log_amplitudes(N: int, t, d: int = 3) -> np.ndarray:
    """log |e_alpha| at any point whose squared moduli are ``t`` (length d, summing to 1).

    ``t`` may also be an array of shape (..., d) for several moduli points.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.shape[-1] != d:
        raise DomainError(f"moduli must have {d} entries")
    zero = t <= 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(np.where(zero, 1.0, t))
    powers = _xlogy_rows(exponents(N, d), logs, zero)
    return 0.5 * (powers - log_norm_sq(N, d))


@dataclass(frozen=True)
class SpherePoint:
    """A point of the unit sphere of C^3 in polar form.

    ``t1, t2`` are squared moduli (t3 = 1 - t1 - t2) and ``theta*`` phases in
    turns.  A point of the sphere of C^2 is stored with t2 = 0 and read off as
    (z, w) = (zeta_1, zeta_3).
    """

    t1: float
    t2: float
    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0

    def __post_init__(self):
        if self.t1 < 0 or self.t2 < 0 or self.t1 + self.t2 > 1 + 1e-15:
            raise DomainError(f"invalid moduli ({self.t1}, {self.t2})")

    @property
    def t3(self) -> float:
        return max(0.0, 1.0 - self.t1 - self.t2)

    def moduli(self, d: int = 3) -> tuple[float, ...]:
        if d == 2:
            return (self.t1, self.t3)
        return (self.t1, self.t2, self.t3)

    def coords(self, d: int = 3) -> np.ndarray:
        mod = np.sqrt(np.array([self.t1, self.t2, self.t3]))
        ph = np.exp(2j * np.pi * np.array([self.theta1, self.theta2, self.theta3]))
        z = mod * ph
        if d == 2:
            return z[[0, 2]]
        return z

    @classmethod
    def from_coords(cls, zeta) -> "SpherePoint":
        zeta = np.asarray(zeta, dtype=complex)
        if zeta.shape == (2,):
            zeta = np.array([zeta[0], 0.0, zeta[1]])
        zeta = zeta / np.linalg.norm(zeta)
        t = np.abs(zeta) ** 2
        th = np.mod(np.angle(zeta) / (2 * np.pi), 1.0)
        return cls(float(t[0]), float(min(t[1], 1.0 - t[0])), float(th[0]), float(th[1]), float(th[2]))

    @classmethod
    def random(cls, rng: np.random.Generator, d: int = 3) -> "SpherePoint":
        z = sample_sphere(1, d, rng)[0]
        return cls.from_coords(z)


def sample_sphere(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform points on the unit sphere of C^d (normalized complex Gaussians)."""
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def frame_values(zeta, N: int, d: int = 3) -> np.ndarray:
    """e_alpha(zeta) for the whole frame; zeta has shape (..., d), result (..., dim)."""
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.shape[-1] != d:
        raise DomainError(f"points must have {d} coordinates")
    ex = exponents(N, d)
    r = np.abs(zeta)
    zero = r == 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(np.where(zero, 1.0, r))
    logamp = _xlogy_rows(ex, logs, zero) - 0.5 * log_norm_sq(N, d)
    phase = np.angle(zeta) @ ex.T.astype(np.float64)
    return np.exp(logamp + 1j * phase)


def eval_normalized_monomial(j, zeta, N: int) -> complex:
    """e_j(zeta) for j = (j1, j2) in the triangle; zeta a SpherePoint or 3 complex coordinates."""
    j1, j2 = int(j[0]), int(j[1])
    if j1 < 0 or j2 < 0 or j1 + j2 > N:
        raise DomainError(f"{(j1, j2)} is not in the triangle for N={N}")
    if isinstance(zeta, SpherePoint):
        zeta = zeta.coords()
    zeta = np.asarray(zeta, dtype=complex)
    alpha = (j1, j2, N - j1 - j2)
    logamp = -0.5 * math.log(monomial_norm_sq(alpha))
    phase = 0.0
    for a, z in zip(alpha, zeta):
        if a == 0:
            continue
        if z == 0:
            return 0j
        logamp += a * math.log(abs(z))
        phase += a * np.angle(z)
    return complex(np.exp(logamp + 1j * phase))


@dataclass
class Poly:
    """A homogeneous polynomial of degree N in d variables, stored in the normalized frame."""

    N: int
    d: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (dimension(self.N, self.d),):
            raise DomainError(
                f"expected {dimension(self.N, self.d)} coefficients, got shape {self.coeffs.shape}"
            )

    @classmethod
    def monomial(cls, j, N: int, d: int = 3) -> "Poly":
        c = np.zeros(dimension(N, d), dtype=complex)
        if d == 2:
            c[int(j if np.isscalar(j) else j[0])] = 1.0
        else:
            c[flat_index(N, int(j[0]), int(j[1]))] = 1.0
        return cls(N, d, c)

    def __call__(self, zeta) -> np.ndarray:
        if isinstance(zeta, SpherePoint):
            zeta = zeta.coords(self.d)
        return frame_values(zeta, self.N, self.d) @ self.coeffs

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)


def inner_product(f: Poly, g: Poly) -> complex:
    """<f, g> in L^2(sphere), computed exactly in coefficient space (pairwise summation)."""
    if f.N != g.N or f.d != g.d:
        raise DomainError("inner product of polynomials from different spaces")
    return complex(np.sum(f.coeffs * np.conj(g.coeffs)))


def gram_deviation(B) -> float:
    """max |Gram(B) - I| over the rows of B (a BasisMatrix or a 2-D array)."""
    rows = np.asarray(getattr(B, "rows", B))
    G = rows @ rows.conj().T
    G[np.diag_indices_from(G)] -= 1.0
    return float(np.max(np.abs(G)))


def kernel_diag(zeta, N: int, d: int = 3) -> float:
    """sum_alpha |e_alpha(zeta)|^2, which equals dim P_N at every point of the sphere."""
    if isinstance(zeta, SpherePoint):
        t = zeta.moduli(d)
    else:
        z = np.asarray(zeta, dtype=complex)
        t = np.abs(z) ** 2 / np.sum(np.abs(z) ** 2)
    return math.fsum(np.exp(2.0 * log_amplitudes(N, t, d)))


def _mc(values_fn, samples: int, d: int, seed: int, chunk: int = 1 << 15) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        v = values_fn(sample_sphere(n, d, rng))
        total += float(np.sum(v))
        total_sq += float(np.sum(v * v))
        done += n
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    se = math.sqrt(var / samples) if samples > 1 else float("inf")
    return mean, se


def mc_l2_norm(f: Poly, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of the integral of |f|^2 over the sphere, with its standard error."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    return _mc(lambda z: np.abs(frame_values(z, f.N, f.d) @ f.coeffs) ** 2, samples, f.d, seed)


def mc_monomial_norm_sq(alpha, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of the integral of |z^alpha|^2 over the sphere of C^len(alpha)."""
    alpha = np.asarray(alpha, dtype=np.float64)
    d = alpha.size
    return _mc(lambda z: np.prod(np.abs(z) ** (2 * alpha), axis=1), samples, d, seed)

"""Sup norms of homogeneous polynomials on the unit sphere (equivalently the closed ball).

|f| is invariant under zeta -> e(phi) zeta, so the last phase is pinned to 0.
For fixed squared moduli t the remaining phases enter as a trigonometric
polynomial with frequencies in [0, N]^(d-1), which is evaluated on an
oversampled torus grid by FFT.  The moduli simplex is scanned on a
triangular grid and refined around the best cell; the winner is polished by
Nelder-Mead on all free parameters using direct evaluation.

Every reported ``lower_bound`` is an actual evaluation of |f| at a reported
point, so it is a certified lower bound for the sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft as sfft
from scipy.optimize import minimize, minimize_scalar

from holobasis.errors import DomainError
from holobasis.geometry import check_degree, tile_mask, triangle_points
from holobasis.monomials import Poly, SpherePoint, exponents, log_amplitudes

SLACK = 1.05


@dataclass
class SupNormEstimate:
    lower_bound: float
    heuristic_upper: float
    point: SpherePoint
    params: dict = field(default_factory=dict)


# coefficients whose amplitude is below exp(-CUT) times the largest one are
# left out of the torus grids (never out of reported values)
CUT = 20.0


@dataclass
class _Window:
    sel: np.ndarray
    pos: np.ndarray
    shape: tuple


class _Engine:
    """Torus-FFT evaluation of many polynomials of one space at given moduli.

    At fixed moduli the amplitudes |e_k| are concentrated in a window of
    width ~ sqrt(t N) around k ~ t N, so each torus grid only spans the
    bounding box of the non-negligible frequencies.  Shifting frequencies
    does not change |f|, so grid phases stay valid.
    """

    def __init__(self, N: int, d: int):
        self.N, self.d = N, d
        self.ex = exponents(N, d)
        self.freqs = self.ex[:, : d - 1].astype(np.float64)

    def full_moduli(self, q) -> np.ndarray:
        q = np.clip(np.asarray(q, dtype=np.float64), 0.0, 1.0)
        s = q.sum()
        if s > 1.0:
            q = q / s
        return np.append(q, max(0.0, 1.0 - q.sum()))

    def log_amplitudes(self, q) -> np.ndarray:
        return log_amplitudes(self.N, self.full_moduli(q), self.d)

    def amplitudes(self, q) -> np.ndarray:
        return np.exp(self.log_amplitudes(q))

    def window(self, la: np.ndarray) -> _Window:
        sel = np.flatnonzero(la >= la.max() - CUT)
        k = self.ex[sel, : self.d - 1]
        lo = k.min(axis=0)
        shape = tuple(int(w) for w in k.max(axis=0) - lo + 1)
        local = k - lo
        pos = local[:, 0] if self.d == 2 else local[:, 0] * shape[1] + local[:, 1]
        return _Window(sel, pos, shape)

    def torus_abs(self, weighted: np.ndarray, win: _Window, oversample: int, dtype=np.complex128):
        """|f| on an oversampled phase grid for rows of windowed, amplitude-weighted coefficients.

        Returns the values, shape (R, L1[, L2]), and the grid lengths.
        """
        R = weighted.shape[0]
        Ls = tuple(sfft.next_fast_len(oversample * w) for w in win.shape)
        C = np.zeros((R, int(np.prod(win.shape))), dtype=dtype)
        C[:, win.pos] = weighted
        C = C.reshape((R,) + win.shape)
        F = sfft.ifftn(C, s=Ls, axes=tuple(range(1, self.d)), overwrite_x=True)
        return np.abs(F) * float(np.prod(Ls)), np.array(Ls)

    def best_over_moduli(self, coeffs: np.ndarray, qs: np.ndarray, oversample: int):
        """Best torus-grid value of one polynomial over a list of moduli points."""
        best = (-1.0, None, None, None)
        for q in qs:
            la = self.log_amplitudes(q)
            win = self.window(la)
            w = coeffs[win.sel] * np.exp(la[win.sel])
            vals, Ls = self.torus_abs(w[None, :], win, oversample)
            i = int(np.argmax(vals))
            if vals.flat[i] > best[0]:
                theta = np.array(np.unravel_index(i, vals.shape[1:]), dtype=np.float64) / Ls
                best = (float(vals.flat[i]), np.array(q, dtype=np.float64), theta, Ls)
        return best

    def value(self, coeffs: np.ndarray, q, theta) -> float:
        amp = self.amplitudes(q)
        ph = np.exp(2j * np.pi * (self.freqs @ np.asarray(theta, dtype=np.float64)))
        return float(abs(np.sum(coeffs * amp * ph)))

    def moduli_grid(self, G: int) -> np.ndarray:
        if self.d == 2:
            pts = np.arange(G + 1)[:, None] / G
        else:
            i, j = np.meshgrid(np.arange(G + 1), np.arange(G + 1), indexing="ij")
            keep = i + j <= G
            pts = np.stack([i[keep], j[keep]], axis=1) / G
        # points just off the vertices, where monomial-like maxima sit
        eps = 1.0 / self.N**2
        verts = np.eye(self.d)[:, : self.d - 1]
        extra = [v + eps * (w - v) for v in verts for w in verts if not np.array_equal(v, w)]
        return np.concatenate([pts, np.array(extra)], axis=0)

    def local_grid(self, q, h: float) -> np.ndarray:
        offs = np.arange(-2, 3) * h
        if self.d == 2:
            pts = q[0] + offs[:, None]
        else:
            a, b = np.meshgrid(offs, offs, indexing="ij")
            pts = np.stack([q[0] + a.ravel(), q[1] + b.ravel()], axis=1)
        ok = np.all(pts >= 0, axis=1) & (pts.sum(axis=1) <= 1.0 + 1e-12)
        return pts[ok]


@lru_cache(maxsize=16)
def _engine(N: int, d: int) -> _Engine:
    return _Engine(N, d)


def _phase_refine(eng: _Engine, coeffs, q, theta, Ls, passes: int = 2):
    theta = np.array(theta, dtype=np.float64)
    best = eng.value(coeffs, q, theta)
    for _ in range(passes):
        for i in range(theta.size):
            def neg(x, i=i):
                th = theta.copy()
                th[i] = x
                return -eng.value(coeffs, q, th)

            h = 1.0 / Ls[i]
            res = minimize_scalar(neg, bounds=(theta[i] - h, theta[i] + h),
                                  method="bounded", options={"xatol": 1e-12})
            if -res.fun > best:
                best = -float(res.fun)
                theta[i] = res.x
    return best, np.mod(theta, 1.0)


def torus_max(f: Poly, t1: float, t2: float = 0.0, oversample: int = 4, refine: bool = True):
    """max over phases of |f| at squared moduli (t1, t2, 1 - t1 - t2).

    For two-variable f only ``t1`` = |z|^2 is used.  Returns ``(value,
    phases)`` where phases are in turns (theta3, resp. the phase of w, is 0).
    """
    if oversample < 1:
        raise DomainError("oversample must be >= 1")
    if t1 < 0 or t2 < 0 or t1 + t2 > 1 + 1e-12:
        raise DomainError(f"invalid moduli ({t1}, {t2})")
    eng = _engine(f.N, f.d)
    q = np.array([t1] if f.d == 2 else [t1, t2])
    val, q, theta, Ls = eng.best_over_moduli(f.coeffs, q[None, :], oversample)
    if not refine:
        return val, tuple(theta)
    best, theta = _phase_refine(eng, f.coeffs, q, theta, Ls)
    return max(best, val), tuple(theta)


def _point(d: int, q, theta) -> SpherePoint:
    if d == 2:
        return SpherePoint(float(q[0]), 0.0, float(theta[0]), 0.0, 0.0)
    return SpherePoint(float(q[0]), float(min(q[1], 1.0 - q[0])), float(theta[0]), float(theta[1]), 0.0)


def _polish(eng: _Engine, coeffs, q, theta, hq: float, hth: float):
    k = len(q)
    x0 = np.concatenate([q, theta])

    def neg(x):
        return -eng.value(coeffs, eng.full_moduli(x[:k])[:k], x[k:])

    simplex = [x0]
    for i in range(2 * k):
        x = x0.copy()
        x[i] += hq if i < k else hth
        simplex.append(x)
    res = minimize(neg, x0, method="Nelder-Mead",
                   options={"initial_simplex": np.array(simplex), "xatol": 1e-10,
                            "fatol": 1e-13, "maxiter": 800})
    qq = eng.full_moduli(res.x[:k])[:k]
    return -float(res.fun), qq, np.mod(res.x[k:], 1.0)


def _refine_row(eng: _Engine, coeffs, best, G: int, refine: int, oversample: int, polish: bool):
    """Local moduli refinement, phase refinement and polish around a grid maximizer."""
    val, q, theta, Ls = best
    h = 1.0 / G
    for _ in range(refine):
        h /= 2
        cand = eng.best_over_moduli(coeffs, eng.local_grid(q, h), oversample)
        if cand[0] > val:
            val, q, theta, Ls = cand
    grid_val = val
    val, theta = _phase_refine(eng, coeffs, q, theta, Ls)
    if polish:
        pv, pq, pth = _polish(eng, coeffs, q, theta, h, 0.5 / float(Ls.max()))
        if pv > val:
            val, q, theta = pv, pq, pth
    # report the value at the reported point exactly
    val = eng.value(coeffs, q, theta)
    return val, grid_val, q, theta


def sup_norm(f: Poly, grid: int = 64, refine: int = 2, oversample: int = 4, polish: bool = True) -> SupNormEstimate:
    """Estimate ||f||_inf on the sphere: simplex scan + local refinement + polish."""
    if grid < 1:
        raise DomainError("moduli grid must be >= 1")
    if oversample < 1:
        raise DomainError("oversample must be >= 1")
    eng = _engine(f.N, f.d)
    best = eng.best_over_moduli(f.coeffs, eng.moduli_grid(grid), oversample)
    val, grid_val, q, theta = _refine_row(eng, f.coeffs, best, grid, refine, oversample, polish)
    params = {"grid": grid, "refine": refine, "oversample": oversample, "grid_max": grid_val}
    return SupNormEstimate(val, max(val, SLACK * grid_val), _point(f.d, q, theta), params)


@dataclass
class ScanResult:
    estimates: list[SupNormEstimate]
    refined: list[int]

    @property
    def values(self) -> np.ndarray:
        return np.array([e.lower_bound for e in self.estimates])

    @property
    def max(self) -> float:
        return float(self.values.max())

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def argmax(self) -> int:
        return int(self.values.argmax())


def scan_basis(B, grid: int = 64, refine: int = 2, oversample: int = 4, top: int | None = None,
               screen_grid: int = 16, screen_oversample: int = 2, chunk_bytes: int = 1 << 27,
               polish: bool = True) -> ScanResult:
    """Sup-norm estimates for every row of a BasisMatrix.

    With ``top=None`` every row gets the full ``sup_norm`` treatment.
    Otherwise all rows are first screened together on a coarse moduli grid
    (``screen_grid``, ``screen_oversample``, single precision FFT); every
    screened maximizer is re-evaluated exactly, and only the ``top`` rows with
    the largest screened values receive the full treatment.  Lower bounds
    stay certified either way.
    """
    N, d = B.N, B.d
    rows = np.asarray(B.rows)
    R = rows.shape[0]
    if top is None or top >= R:
        ests = [sup_norm(Poly(N, d, rows[i]), grid, refine, oversample, polish) for i in range(R)]
        return ScanResult(ests, list(range(R)))

    eng = _engine(N, d)
    best_val = np.full(R, -1.0)
    best_q = np.zeros((R, d - 1))
    best_th = np.zeros((R, d - 1))
    for q in eng.moduli_grid(screen_grid):
        la = eng.log_amplitudes(q)
        win = eng.window(la)
        amp = np.exp(la[win.sel])
        per_row = 8 * 3 * int(np.prod([sfft.next_fast_len(screen_oversample * w) for w in win.shape]))
        step = max(1, min(R, chunk_bytes // per_row))
        for s in range(0, R, step):
            block = (rows[s:s + step, win.sel] * amp).astype(np.complex64)
            vals, Ls = eng.torus_abs(block, win, screen_oversample, dtype=np.complex64)
            vals = vals.reshape(block.shape[0], -1)
            i = vals.argmax(axis=1)
            v = vals[np.arange(vals.shape[0]), i]
            better = v > best_val[s:s + step]
            if np.any(better):
                sel = np.flatnonzero(better)
                best_val[s + sel] = v[sel]
                best_q[s + sel] = q
                best_th[s + sel] = np.stack(np.unravel_index(i[sel], tuple(Ls)), axis=1) / Ls

    ests = []
    for r in range(R):
        val = eng.value(rows[r], best_q[r], best_th[r])
        ests.append(SupNormEstimate(val, SLACK * val, _point(d, best_q[r], best_th[r]),
                                    {"screened": True, "screen_grid": screen_grid,
                                     "screen_oversample": screen_oversample}))
    order = np.argsort(-best_val, kind="stable")[:top]
    for r in order:
        est = sup_norm(Poly(N, d, rows[r]), grid, refine, oversample, polish)
        if est.lower_bound < ests[r].lower_bound:
            est = SupNormEstimate(ests[r].lower_bound, max(est.heuristic_upper, ests[r].heuristic_upper),
                                  ests[r].point, est.params)
        ests[r] = est
    return ScanResult(ests, [int(r) for r in order])


def localization(zeta, N: int, A: float) -> float:
    """Fraction of sum_{k in X} |e_k(zeta)|^2 carried outside the axis tile around (t1 N, t2 N)."""
    N = check_degree(N)
    if A <= 0:
        raise DomainError("inflation must be positive")
    if not isinstance(zeta, SpherePoint):
        zeta = SpherePoint.from_coords(zeta)
    t = zeta.moduli(3)
    w = np.exp(2.0 * log_amplitudes(N, t, 3))
    inX = triangle_points(N)[:, 0] >= 1
    center = (min(int(math.floor(t[0] * N)), N), min(int(math.floor(t[1] * N)), N))
    if center[0] + center[1] > N:
        center = (center[0], N - center[0])
    inside = tile_mask(center, N, "axis-box", A)
    total = math.fsum(w[inX])
    if total == 0.0:
        return 0.0
    return math.fsum(w[inX & ~inside]) / total

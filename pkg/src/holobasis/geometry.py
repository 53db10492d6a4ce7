"""Lattice geometry of the index triangle.

For odd N the triangle

    Delta = {(j1, j2) : j1, j2 >= 0, j1 + j2 <= N}

indexes the monomials z1^j1 z2^j2 z3^(N-j1-j2).  It splits into the edge
Delta0 (j1 = 0), the lower part DeltaPrime (j1 >= 1, j2 <= (N-1)/2) and the
upper part DeltaDoublePrime (j1 >= 1, j2 >= (N+1)/2).  The upper part is
carried by an integer reflection onto the missing corner of the rectangle
{1..N} x {0..(N-1)/2}, so that DeltaPrime and the reflected upper part tile
that rectangle exactly.

Every array indexed by Delta uses one canonical order: row-major with j2 as
the outer (ascending) loop and j1 as the inner (ascending) loop.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from holobasis.errors import DomainError


class Region(str, enum.Enum):
    DELTA0 = "Delta0"
    PRIME = "DeltaPrime"
    DOUBLE_PRIME = "DeltaDoublePrime"


class TileShape(str, enum.Enum):
    AXIS = "axis-box"
    SKEW = "skew-box"


def check_degree(N: int, d: int = 3) -> int:
    """Validate a polynomial degree for the d-dimensional construction."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise DomainError(f"degree must be an integer, got {N!r}")
    N = int(N)
    if d == 2:
        if N < 1:
            raise DomainError("degree must be >= 1")
        return N
    if d != 3:
        raise DomainError(f"dimension must be 2 or 3, got {d}")
    if N % 2 == 0:
        raise DomainError("degree must be odd")
    if N < 3:
        raise DomainError("degree must be >= 3")
    return N


@dataclass(frozen=True)
class Degree:
    """An odd degree N >= 3 together with D = dim P_N and the Haar level m."""

    N: int

    def __post_init__(self):
        check_degree(self.N)

    @property
    def D(self) -> int:
        return dimension(self.N)

    @property
    def m(self) -> int:
        return haar_level(self.N)

    @property
    def half(self) -> int:
        return (self.N - 1) // 2


def dimension(N: int, d: int = 3) -> int:
    if d == 2:
        return N + 1
    return (N + 1) * (N + 2) // 2


def haar_level(N: int) -> int:
    """Largest m with 2^m <= D."""
    return dimension(N).bit_length() - 1


def flat_index(N: int, j1, j2):
    """Position of (j1, j2) in the canonical order of Delta (vectorizes over arrays)."""
    return j2 * (N + 1) - (j2 * (j2 - 1)) // 2 + j1


@lru_cache(maxsize=32)
def _triangle(N: int) -> np.ndarray:
    j2, j1 = np.divmod(np.arange((N + 1) ** 2), N + 1)
    keep = j1 + j2 <= N
    pts = np.stack([j1[keep], j2[keep]], axis=1)
    pts.setflags(write=False)
    return pts


def triangle_points(N: int) -> np.ndarray:
    """All (j1, j2) in Delta as a read-only (D, 2) int array in canonical order.

    No parity restriction, so the same order serves even degrees in tests.
    """
    if N < 0:
        raise DomainError("degree must be nonnegative")
    return _triangle(int(N))


def region_of(j, N: int) -> Region:
    j1, j2 = int(j[0]), int(j[1])
    if j1 < 0 or j2 < 0 or j1 + j2 > N:
        raise DomainError(f"{(j1, j2)} is not in the triangle for N={N}")
    if j1 == 0:
        return Region.DELTA0
    if j2 <= (N - 1) // 2:
        return Region.PRIME
    return Region.DOUBLE_PRIME


@lru_cache(maxsize=32)
def _region_codes(N: int) -> np.ndarray:
    pts = _triangle(N)
    codes = np.where(pts[:, 0] == 0, 0, np.where(pts[:, 1] <= (N - 1) // 2, 1, 2))
    codes.setflags(write=False)
    return codes


def region_codes(N: int) -> np.ndarray:
    """Per-point region code in canonical order: 0 = Delta0, 1 = DeltaPrime, 2 = DeltaDoublePrime."""
    check_degree(N)
    return _region_codes(N)


def enumerate_regions(N: int) -> list[tuple[tuple[int, int], Region]]:
    """All D points of Delta in canonical order, each with its region label."""
    check_degree(N)
    labels = (Region.DELTA0, Region.PRIME, Region.DOUBLE_PRIME)
    return [((int(a), int(b)), labels[c]) for (a, b), c in zip(_triangle(N), _region_codes(N))]


def reflect(j, N: int) -> tuple[int, int]:
    """The affine map T(j) = (N + 1 - j1, N - j2) from DeltaDoublePrime onto the grid corner."""
    check_degree(N)
    if region_of(j, N) is not Region.DOUBLE_PRIME:
        raise DomainError(f"reflect is defined on DeltaDoublePrime only, got {tuple(j)}")
    return (N + 1 - int(j[0]), N - int(j[1]))


def fold(k, N: int) -> tuple[int, int]:
    """Identity on DeltaPrime, reflect on DeltaDoublePrime."""
    check_degree(N)
    r = region_of(k, N)
    if r is Region.DELTA0:
        raise DomainError(f"fold is undefined on Delta0, got {tuple(k)}")
    if r is Region.PRIME:
        return (int(k[0]), int(k[1]))
    return (N + 1 - int(k[0]), N - int(k[1]))


def fold_points(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized fold over X = DeltaPrime then DeltaDoublePrime.

    Returns ``(flat, grid)``: canonical flat indices of the points of X
    (all of DeltaPrime in canonical order, then all of DeltaDoublePrime) and
    their folded grid coordinates, shape (N(N+1)/2, 2).
    """
    check_degree(N)
    pts = _triangle(N)
    codes = _region_codes(N)
    flat = np.concatenate([np.flatnonzero(codes == 1), np.flatnonzero(codes == 2)])
    grid = pts[flat].copy()
    upper = codes[flat] == 2
    grid[upper, 0] = N + 1 - grid[upper, 0]
    grid[upper, 1] = N - grid[upper, 1]
    return flat, grid


def _tile_mask(center, N: int, shape, A: float, pts: np.ndarray) -> np.ndarray:
    c1, c2 = int(center[0]), int(center[1])
    k1, k2 = pts[:, 0], pts[:, 1]
    shape = TileShape(shape)
    if shape is TileShape.AXIS:
        ok = (np.abs(k1 - c1) <= A * math.sqrt(c1 + 1)) & (np.abs(k2 - c2) <= A * math.sqrt(c2 + 1))
    else:
        rest = N - c1 - c2
        ok = (np.abs(k2 - c2) <= A * math.sqrt(c2 + 1)) & (
            np.abs(k1 + k2 - c1 - c2) <= A * math.sqrt(rest + 1)
        )
    return ok & (k1 >= 1)


def tile_mask(center, N: int, shape="axis-box", A: float = 1.0) -> np.ndarray:
    """Boolean mask over canonical Delta selecting the tile clipped to DeltaPrime u DeltaDoublePrime."""
    check_degree(N)
    if A <= 0:
        raise DomainError("inflation must be positive")
    region_of(center, N)
    return _tile_mask(center, N, shape, A, _triangle(N))


def make_tile(center, N: int, shape="axis-box", A: float = 1.0) -> set[tuple[int, int]]:
    """Lattice points of a localization tile around ``center``.

    The axis box allows |k1 - c1| <= A sqrt(c1 + 1) and |k2 - c2| <= A sqrt(c2 + 1);
    the skew box replaces the k1 window by |k1 + k2 - c1 - c2| <= A sqrt(N - c1 - c2 + 1),
    which is the right shape when the third exponent N - c1 - c2 is small.
    """
    mask = tile_mask(center, N, shape, A)
    return {(int(a), int(b)) for a, b in _triangle(N)[mask]}

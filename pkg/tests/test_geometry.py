import numpy as np
import pytest
from hypothesis import given, strategies as st

from holobasis.errors import DomainError
from holobasis.geometry import (
    Degree,
    Region,
    check_degree,
    dimension,
    enumerate_regions,
    flat_index,
    fold,
    fold_points,
    haar_level,
    make_tile,
    reflect,
    region_of,
    tile_mask,
    triangle_points,
)

odd_degrees = st.integers(1, 80).map(lambda n: 2 * n + 1)


def brute_regions(N):
    h = (N - 1) // 2
    out = {"Delta0": 0, "DeltaPrime": 0, "DeltaDoublePrime": 0}
    for j2 in range(N + 1):
        for j1 in range(N + 1 - j2):
            if j1 == 0:
                out["Delta0"] += 1
            elif j2 <= h:
                out["DeltaPrime"] += 1
            else:
                out["DeltaDoublePrime"] += 1
    return out


def test_region_counts_n7():
    counts = {r.value: 0 for r in Region}
    for _, r in enumerate_regions(7):
        counts[r.value] += 1
    assert sum(counts.values()) == 36
    assert counts == brute_regions(7)
    # h = 3: j1 >= 1 with j2 <= 3 gives 7+6+5+4 points, j2 >= 4 gives 3+2+1
    assert counts == {"Delta0": 8, "DeltaPrime": 22, "DeltaDoublePrime": 6}


@given(odd_degrees)
def test_region_counts_match_brute_force(N):
    counts = {r.value: 0 for r in Region}
    for _, r in enumerate_regions(N):
        counts[r.value] += 1
    assert counts == brute_regions(N)
    assert counts["DeltaPrime"] + counts["DeltaDoublePrime"] == N * (N + 1) // 2


def test_small_dimensions():
    assert dimension(3) == 10 == len(triangle_points(3))
    assert dimension(7) == 36
    assert dimension(7, d=2) == 8
    assert haar_level(7) == 5


def test_region_labels():
    assert region_of((0, 5), 7) is Region.DELTA0
    assert region_of((1, 3), 7) is Region.PRIME
    assert region_of((1, 4), 7) is Region.DOUBLE_PRIME


@pytest.mark.parametrize("bad, msg", [(8, "odd"), (1, ">= 3"), (-3, ">= 3")])
def test_degree_rejected(bad, msg):
    with pytest.raises(DomainError, match=msg):
        check_degree(bad)


def test_degree_record():
    g = Degree(7)
    assert (g.D, g.m, g.half) == (36, 5, 3)
    assert check_degree(2, d=2) == 2


@given(odd_degrees)
def test_haar_level_fits_psi_block(N):
    D, m = dimension(N), haar_level(N)
    assert 2**m <= D < 2 ** (m + 1)
    assert N + 1 <= 2**m


@given(odd_degrees)
def test_flat_index_is_canonical_position(N):
    pts = triangle_points(N)
    assert np.array_equal(flat_index(N, pts[:, 0], pts[:, 1]), np.arange(len(pts)))
    # row-major with j2 outer
    assert np.all(np.diff(pts[:, 1]) >= 0)


def test_reflect_vertices_n7():
    assert reflect((1, 6), 7) == (7, 1)
    assert reflect((1, 4), 7) == (7, 3)
    assert reflect((3, 4), 7) == (5, 3)
    with pytest.raises(DomainError):
        reflect((1, 3), 7)


def test_fold_examples():
    assert fold((2, 1), 7) == (2, 1)
    assert fold((2, 5), 7) == (6, 2)
    with pytest.raises(DomainError):
        fold((0, 2), 7)


@given(odd_degrees)
def test_fold_is_bijection_onto_rectangle(N):
    h = (N - 1) // 2
    flat, grid = fold_points(N)
    assert len(flat) == N * (h + 1)
    got = sorted(map(tuple, grid.tolist()))
    want = sorted((a, b) for a in range(1, N + 1) for b in range(h + 1))
    assert got == want
    pts = triangle_points(N)
    for i in (0, len(flat) // 2, len(flat) - 1):
        assert fold(tuple(pts[flat[i]]), N) == tuple(grid[i])


def test_axis_tile_n7():
    tile = make_tile((3, 2), 7, "axis-box", 1.0)
    want = {(a, b) for a in range(1, 6) for b in range(1, 4) if a + b <= 7}
    assert tile == want


def test_tile_degenerate_inflation():
    assert make_tile((3, 2), 7, "axis-box", 1e-9) == {(3, 2)}
    assert make_tile((15, 15), 31, "skew-box", 1e-9) == {(15, 15)}
    with pytest.raises(DomainError):
        tile_mask((3, 2), 7, "axis-box", 0.0)


def test_skew_tile_n31():
    tile = make_tile((15, 15), 31, "skew-box", 1.0)
    want = {(a, b) for b in range(31 + 1) for a in range(1, 32 - b)
            if abs(b - 15) <= 4.0 and abs(a + b - 30) <= np.sqrt(2)}
    assert tile == want


@given(odd_degrees, st.floats(0.5, 4.0))
def test_tiles_grow_with_inflation(N, A):
    c = (max(1, N // 3), N // 3)
    small = tile_mask(c, N, "axis-box", A)
    big = tile_mask(c, N, "axis-box", 2 * A)
    assert np.all(big[small])

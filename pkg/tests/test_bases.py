import math

import numpy as np
import pytest
from scipy import sparse

from holobasis import bases
from holobasis.errors import DomainError
from holobasis.geometry import dimension, flat_index, fold_points, haar_level, triangle_points
from holobasis.monomials import frame_values, sample_sphere
from holobasis.supnorm import scan_basis


def test_phi2_small():
    B = bases.build_phi2(1)
    assert np.allclose(B.rows @ B.rows.conj().T, np.eye(2), atol=0, rtol=0) or B.gram_deviation() < 1e-15
    N = 15
    B = bases.build_phi2(N)
    assert B.gram_deviation() <= 1e-12
    assert np.allclose(np.abs(B.rows), 1 / math.sqrt(N + 1), rtol=1e-14)


def test_psi_relation():
    N = 15
    rng = np.random.default_rng(0)
    zw = sample_sphere(20, 2, rng)
    zeta = np.column_stack([np.zeros(20), zw])
    psi = frame_values(zeta, N) @ bases.build_psi(N).rows.T
    phi = frame_values(zw, N, 2) @ bases.build_phi2(N).rows.T
    assert np.max(np.abs(psi - math.sqrt(N / 2 + 1) * phi)) <= 1e-10


def test_psi_support_and_gram():
    N = 31
    B = bases.build_psi(N)
    assert B.gram_deviation() <= 1e-12
    off = np.ones(dimension(N), bool)
    off[flat_index(N, 0, np.arange(N + 1))] = False
    assert not np.any(B.rows[:, off])


def test_eta_orthonormal():
    N = 15
    B = bases.build_eta(N)
    assert len(B) == 120
    assert B.gram_deviation() <= 1e-11
    assert np.allclose(np.abs(B.rows[:, triangle_points(N)[:, 0] >= 1]), 1 / math.sqrt(N * (N + 1) / 2))
    assert not np.any(B.rows[:, triangle_points(N)[:, 0] == 0])


def test_eta_cross_region():
    N = 15
    flat, grid = fold_points(N)
    B = bases.build_eta(N)
    n_prime = int(np.sum(triangle_points(N)[flat, 1] <= (N - 1) // 2))
    i, j = 3, n_prime + 5
    assert tuple(grid[i]) != tuple(grid[j])
    assert abs(np.vdot(B.rows[j], B.rows[i])) <= 1e-12


def test_eta_any_unimodular_weights():
    rng = np.random.default_rng(1)
    B = bases.build_eta(11, weights=lambda k1, k2: np.exp(2j * np.pi * rng.random(k1.shape)))
    assert B.gram_deviation() <= 1e-12


def test_haar_examples():
    s = 1 / math.sqrt(2)
    assert np.allclose(bases.haar(1), [[s, s], [s, -s]])
    H = bases.haar(2)
    assert np.allclose(H[:, 3], [0, 0, s, -s])
    for m in range(1, 9):
        H = bases.haar(m)
        assert np.max(np.abs(H.T @ H - np.eye(1 << m))) <= 1e-14


def test_absorption():
    A = bases.absorption(7)
    assert sparse.issparse(A)
    Ad = A.toarray()
    assert Ad.shape == (36, 36)
    assert np.allclose(Ad[:32, :32], bases.haar(5))
    assert np.array_equal(Ad[32:, 32:], np.eye(4))
    assert np.max(np.abs(Ad.T @ Ad - np.eye(36))) <= 1e-13
    assert not np.any(Ad[:32, 32:]) and not np.any(Ad[32:, :32])


@pytest.mark.parametrize("N", [3, 7, 15, 31])
def test_assembled_orthonormal_and_spanning(N):
    B = bases.assemble(N)
    D = dimension(N)
    assert B.rows.shape == (D, D)
    assert B.gram_deviation() <= 1e-11
    s = np.linalg.svd(B.rows, compute_uv=False)
    assert s.min() >= 1 - 1e-9
    assert B.params["haar_level"] == haar_level(N)


def test_assembled_spreads_psi_mass():
    # the first N+1 Haar columns cover levels up to ceil(log2(N+1)), so each row
    # keeps at most 2^ceil(log2(N+1)) / 2^m of the Y-mass
    N = 31
    B = bases.assemble(N)
    m = haar_level(N)
    ycols = flat_index(N, 0, np.arange(N + 1))
    ymass = np.sum(np.abs(B.rows[:, ycols]) ** 2, axis=1)
    assert ymass.max() <= 2.0 ** (math.ceil(math.log2(N + 1)) - m) + 1e-12
    assert ymass.sum() == pytest.approx(N + 1)


def test_assembled_bounded_small():
    b7 = scan_basis(bases.assemble(7), grid=24, top=8, screen_grid=12).max
    b31 = scan_basis(bases.assemble(31), grid=24, top=8, screen_grid=12).max
    assert b31 <= 3 * b7


def test_build_dispatch_errors():
    with pytest.raises(DomainError):
        bases.build("phi2", 7, 3)
    with pytest.raises(DomainError):
        bases.build("eta", 7, 2)
    with pytest.raises(DomainError):
        bases.build("nope", 7)
    with pytest.raises(DomainError, match="odd"):
        bases.build("assembled", 8)
    assert bases.build("monomial", 7).gram_deviation() == 0

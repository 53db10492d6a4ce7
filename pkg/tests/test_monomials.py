import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holobasis.bases import build_phi2
from holobasis.monomials import (
    Poly,
    SpherePoint,
    eval_normalized_monomial,
    exponents,
    frame_values,
    gram_deviation,
    inner_product,
    kernel_diag,
    mc_l2_norm,
    monomial_norm_sq,
    monomial_norm_sq_exact,
    sample_sphere,
)


def exact_norm(alpha):
    d = len(alpha)
    num = math.factorial(d - 1) * math.prod(math.factorial(a) for a in alpha)
    return Fraction(num, math.factorial(d - 1 + sum(alpha)))


def test_norm_examples():
    assert monomial_norm_sq((0, 0, 0)) == pytest.approx(1.0, rel=1e-15)
    assert monomial_norm_sq((1, 0, 0)) == pytest.approx(1 / 3, rel=1e-15)
    for N in range(1, 20):
        assert monomial_norm_sq((N, 0)) == pytest.approx(1 / (N + 1), rel=1e-13)


@given(st.lists(st.integers(0, 40), min_size=2, max_size=3))
def test_norm_against_factorials(alpha):
    alpha = tuple(alpha)
    assert monomial_norm_sq_exact(alpha) == exact_norm(alpha)
    assert monomial_norm_sq(alpha) == pytest.approx(float(exact_norm(alpha)), rel=1e-12)


def test_monomial_values():
    N = 7
    D = (N + 1) * (N + 2) // 2
    assert abs(eval_normalized_monomial((N, 0), SpherePoint(1.0, 0.0, 0.3), N)) == pytest.approx(math.sqrt(D))
    z = SpherePoint(1 / 3, 1 / 3)
    assert eval_normalized_monomial((1, 1), z, 3).real == pytest.approx((1 / 3) ** 1.5 * math.sqrt(60), rel=1e-13)
    assert eval_normalized_monomial((1, 1), SpherePoint(0.5, 0.0), 3) == 0


def test_frame_values_match_scalar():
    rng = np.random.default_rng(1)
    z = sample_sphere(5, 3, rng)
    N = 9
    vals = frame_values(z, N)
    ex = exponents(N)
    for i in range(5):
        for c in (0, 17, 54):
            direct = np.prod(z[i] ** ex[c]) / math.sqrt(monomial_norm_sq(tuple(ex[c])))
            assert vals[i, c] == pytest.approx(direct, rel=1e-12, abs=1e-14)


def test_inner_products():
    N = 5
    a = Poly.monomial((1, 2), N)
    b = Poly.monomial((2, 1), N)
    assert inner_product(a, a) == pytest.approx(1)
    assert inner_product(a, b) == 0
    assert Poly(N, 3, 3 * a.coeffs).norm() == pytest.approx(3)


def test_gram_deviation_examples():
    I = np.eye(10, dtype=complex)
    assert gram_deviation(I) == 0
    I[3] *= 2
    assert gram_deviation(I) == pytest.approx(3)
    assert gram_deviation(build_phi2(15)) <= 1e-12


def test_kernel_examples():
    assert kernel_diag(np.array([1, 0, 0]), 3) == pytest.approx(10, rel=1e-14)
    assert kernel_diag(SpherePoint(0.2, 0.5), 1) == pytest.approx(3, rel=1e-14)
    rng = np.random.default_rng(2)
    for z in sample_sphere(100, 3, rng):
        assert kernel_diag(z, 7) == pytest.approx(36, rel=1e-8)


@settings(max_examples=30)
@given(st.integers(1, 60), st.floats(0, 1), st.floats(0, 1))
def test_kernel_is_dimension(N, a, b):
    t1, t2 = a, (1 - a) * b
    D = (N + 1) * (N + 2) / 2
    assert kernel_diag(SpherePoint(t1, t2), N) == pytest.approx(D, rel=1e-10)


def test_kernel_two_variables():
    for t in (0.0, 0.3, 1.0):
        assert kernel_diag(SpherePoint(t, 0.0), 11, d=2) == pytest.approx(12, rel=1e-12)


@pytest.mark.parametrize("make, expected", [
    (lambda: Poly.monomial((2, 3), 6), 1.0),
    (lambda: Poly(6, 3, Poly.monomial((2, 3), 6).coeffs + Poly.monomial((0, 6), 6).coeffs), 2.0),
])
def test_mc_norm(make, expected):
    mean, se = mc_l2_norm(make(), 200_000, seed=3)
    assert abs(mean - expected) <= 3 * se


def test_mc_phi0():
    N = 15
    phi = build_phi2(N)[0]
    mean, se = mc_l2_norm(phi, 10**6, seed=4)
    assert abs(mean - 1) <= 3 * se
    assert abs(mean - 1) <= 0.01


def test_sphere_point_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = SpherePoint.random(rng)
        q = SpherePoint.from_coords(p.coords())
        assert np.allclose(p.coords(), q.coords(), atol=1e-14)

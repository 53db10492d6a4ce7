"""Explicit orthonormal bases of P_N in the normalized monomial frame.

Families built here (rows are coefficient vectors in the frame of
``holobasis.monomials``):

* ``phi2``: the two-variable basis, a Rudin-Shapiro signed DFT of the frame;
* ``psi``: the same signed DFT on the edge Delta0 (the subspace Y of
  polynomials free of z1);
* ``eta``: a folded two-dimensional DFT with quadratic-phase weights on
  DeltaPrime u DeltaDoublePrime (the subspace X);
* ``assembled``: the Haar-absorbed union of psi and eta, an orthonormal basis
  of all of P_N whose sup norms stay bounded in N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from holobasis.errors import DomainError
from holobasis.geometry import (
    check_degree,
    dimension,
    flat_index,
    fold_points,
    haar_level,
    triangle_points,
)
from holobasis.monomials import Poly, gram_deviation
from holobasis.sequences import quadratic_phase_turns, rudin_shapiro

BLOCKS = ("phi2", "psi", "eta", "assembled", "monomial")


@dataclass
class BasisMatrix:
    """Ordered family of polynomials of degree N in d variables, one per row."""

    N: int
    d: int
    rows: np.ndarray = field(repr=False)
    tag: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[1] != dimension(self.N, self.d):
            raise DomainError(f"rows must have {dimension(self.N, self.d)} columns")

    def __len__(self) -> int:
        return self.rows.shape[0]

    def __getitem__(self, i: int) -> Poly:
        return Poly(self.N, self.d, self.rows[i])

    def gram_deviation(self) -> float:
        return gram_deviation(self.rows)


def _turns_to_unit(turns: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * turns)


def build_phi2(N: int) -> BasisMatrix:
    """phi_k = (N+1)^(-1/2) sum_j sigma_j e(jk/(N+1)) e_j in two variables, k = 0..N."""
    N = check_degree(N, d=2)
    j = np.arange(N + 1)
    sigma = rudin_shapiro(j)
    turns = np.outer(j, j) % (N + 1) / (N + 1)
    rows = sigma[None, :] * _turns_to_unit(turns) / math.sqrt(N + 1)
    return BasisMatrix(N, 2, rows, "phi2")


def build_psi(N: int) -> BasisMatrix:
    """The phi2 system transplanted onto the edge monomials z2^j z3^(N-j) of P_N(C^3)."""
    N = check_degree(N)
    phi = build_phi2(N).rows
    rows = np.zeros((N + 1, dimension(N)), dtype=complex)
    rows[:, flat_index(N, 0, np.arange(N + 1))] = phi
    return BasisMatrix(N, 3, rows, "psi")


def build_eta(N: int, weights=None) -> BasisMatrix:
    """Orthonormal basis of X indexed by DeltaPrime then DeltaDoublePrime.

    The coefficient of e_k in eta_j is

        u_k e(g1(j) g1(k) / N + g2(j) g2(k) / ((N+1)/2)) / sqrt(N (N+1) / 2)

    where g = fold.  Since fold is a bijection onto the rectangle
    {1..N} x {0..(N-1)/2}, this is a unitary 2-D DFT followed by a unimodular
    diagonal.  ``weights`` overrides u_k (a function of (k1, k2) arrays
    returning unimodular values); the default is the quadratic phase.
    """
    N = check_degree(N)
    flat, grid = fold_points(N)
    k = triangle_points(N)[flat]
    if weights is None:
        u = _turns_to_unit(quadratic_phase_turns(k[:, 0], k[:, 1]))
    else:
        u = np.asarray(weights(k[:, 0], k[:, 1]), dtype=complex)
    half = (N + 1) // 2
    g1, g2 = grid[:, 0].astype(np.int64), grid[:, 1].astype(np.int64)
    # exact residues before dividing keep the DFT phases exact
    turns = (np.outer(g1, g1) % N) / N + (np.outer(g2, g2) % half) / half
    block = _turns_to_unit(turns)
    block *= u[None, :]
    block /= math.sqrt(N * half)
    rows = np.zeros((flat.size, dimension(N)), dtype=complex)
    rows[:, flat] = block
    return BasisMatrix(N, 3, rows, "eta")


def haar(m: int) -> np.ndarray:
    """2^m x 2^m orthogonal matrix whose column l is the l-th discrete Haar function.

    Column 0 is constant; column 1 is +/- on the two halves; then level by
    level (2^(s-1) functions at level s, supports left to right).
    """
    if m < 1:
        raise DomainError("Haar level must be >= 1")
    n = 1 << m
    H = np.zeros((n, n))
    H[:, 0] = 1.0 / math.sqrt(n)
    col = 1
    for s in range(1, m + 1):
        width = n >> (s - 1)
        amp = 1.0 / math.sqrt(width)
        for b in range(1 << (s - 1)):
            start = b * width
            H[start:start + width // 2, col] = amp
            H[start + width // 2:start + width, col] = -amp
            col += 1
    return H


def absorption(N: int) -> sparse.csr_array:
    """The D x D orthogonal matrix: Haar block on [0, 2^m), identity on [2^m, D)."""
    N = check_degree(N)
    D = dimension(N)
    m = haar_level(N)
    if N + 1 > (1 << m):
        raise DomainError("the psi block does not fit inside the Haar block")
    H = sparse.csr_array(haar(m))
    rest = sparse.identity(D - (1 << m), format="csr")
    return sparse.csr_array(sparse.block_diag([H, rest], format="csr"))


def stacked(N: int) -> np.ndarray:
    """psi rows (positions 0..N) followed by eta rows."""
    psi = build_psi(N).rows
    eta = build_eta(N).rows
    return np.concatenate([psi, eta], axis=0)


def assemble(N: int) -> BasisMatrix:
    """g_k = sum_l A[k, l] h_l with h the stacked psi/eta family."""
    N = check_degree(N)
    A = absorption(N)
    h = stacked(N)
    rows = A @ h
    del h
    return BasisMatrix(N, 3, np.ascontiguousarray(rows), "assembled", {"haar_level": haar_level(N)})


def monomial_frame(N: int, d: int = 3) -> BasisMatrix:
    """The raw normalized-monomial frame (identity rows); a contrast baseline."""
    N = check_degree(N, d=d)
    return BasisMatrix(N, d, np.eye(dimension(N, d), dtype=complex), "monomial")


def build(block: str, N: int, d: int = 3) -> BasisMatrix:
    if block == "phi2":
        if d != 2:
            raise DomainError("phi2 lives in two variables (--dim 2)")
        return build_phi2(N)
    if d != 3 and block != "monomial":
        raise DomainError(f"block {block!r} lives in three variables (--dim 3)")
    if block == "psi":
        return build_psi(N)
    if block == "eta":
        return build_eta(N)
    if block == "assembled":
        return assemble(N)
    if block == "monomial":
        return monomial_frame(N, d)
    raise DomainError(f"unknown block {block!r}")

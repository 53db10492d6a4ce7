"""Basis files (JSON) and tabular outputs (CSV)."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from holobasis.bases import BasisMatrix
from holobasis.errors import DomainError
from holobasis.geometry import dimension, flat_index, triangle_points

FORMAT_VERSION = 1


def _ordering(B: BasisMatrix) -> tuple[list[list[int]], np.ndarray]:
    """Index pairs stored in the file and the matching columns of B.rows."""
    N = B.N
    if B.d == 2:
        j = np.arange(N + 1)
        return [[int(a), int(N - a)] for a in j], j
    if B.tag == "psi":
        j2 = np.arange(N + 1)
        return [[0, int(b)] for b in j2], flat_index(N, 0, j2)
    pts = triangle_points(N)
    return pts.tolist(), np.arange(len(pts))


def basis_to_dict(B: BasisMatrix) -> dict:
    ordering, cols = _ordering(B)
    sub = B.rows[:, cols]
    off = np.ones(B.rows.shape[1], dtype=bool)
    off[cols] = False
    if np.any(B.rows[:, off] != 0):
        raise DomainError("psi block has coefficients off Delta0")
    vectors = [[[float(z.real), float(z.imag)] for z in row] for row in sub]
    return {
        "format_version": FORMAT_VERSION,
        "dim": B.d,
        "degree": B.N,
        "ordering": ordering,
        "vectors": vectors,
        "meta": {"block": B.tag, "params": B.params},
    }


def basis_from_dict(doc: dict) -> BasisMatrix:
    if doc.get("format_version") != FORMAT_VERSION:
        raise DomainError(f"unsupported basis file version {doc.get('format_version')!r}")
    d, N = int(doc["dim"]), int(doc["degree"])
    ordering = np.asarray(doc["ordering"], dtype=np.int64).reshape(-1, 2)
    vec = np.asarray(doc["vectors"], dtype=np.float64)
    if vec.ndim != 3 or vec.shape[1:] != (len(ordering), 2):
        raise DomainError("vectors must be a rectangular array of [re, im] pairs aligned with ordering")
    vals = vec[..., 0] + 1j * vec[..., 1]
    if d == 2:
        if np.any(ordering.sum(axis=1) != N):
            raise DomainError("two-variable ordering entries must sum to the degree")
        cols = ordering[:, 0]
    else:
        if np.any(ordering < 0) or np.any(ordering.sum(axis=1) > N):
            raise DomainError("ordering entries must lie in the triangle")
        cols = flat_index(N, ordering[:, 0], ordering[:, 1])
    rows = np.zeros((vals.shape[0], dimension(N, d)), dtype=complex)
    rows[:, cols] = vals
    meta = doc.get("meta", {})
    return BasisMatrix(N, d, rows, meta.get("block", "unknown"), dict(meta.get("params", {})))


def save_basis(B: BasisMatrix, path) -> None:
    Path(path).write_text(json.dumps(basis_to_dict(B)))


def load_basis(path) -> BasisMatrix:
    return basis_from_dict(json.loads(Path(path).read_text()))


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])

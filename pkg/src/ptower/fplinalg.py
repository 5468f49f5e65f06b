"""Exact row-echelon linear algebra over the prime field F_p.

Vectors are numpy int64 arrays with entries reduced to 0..p-1.  The reduced
row echelon form is the canonical representative of a row space, so two
subspaces are equal iff their matrices compare equal entrywise.
"""

from __future__ import annotations

import numpy as np


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


class EchelonBasis:
    """Incrementally built reduced row echelon basis over F_p."""

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.rows: list[np.ndarray] = []   # kept sorted by pivot column
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> np.ndarray:
        """Remainder of vec after elimination against the current basis."""
        v = np.asarray(vec, dtype=np.int64) % self.p
        for piv, row in zip(self.pivots, self.rows):
            c = v[piv]
            if c:
                v = (v - c * row) % self.p
        return v

    def insert(self, vec) -> bool:
        """Add vec to the basis; returns False when it was already in span."""
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = (v * _inv_mod(v[piv], self.p)) % self.p
        # keep the basis fully reduced: clear the new pivot column above
        for i, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[i] = (row - c * v) % self.p
        at = np.searchsorted(np.array(self.pivots, dtype=np.int64), piv)
        self.rows.insert(int(at), v)
        self.pivots.insert(int(at), piv)
        return True

    def contains(self, vec) -> bool:
        return not np.any(self.reduce(vec))

    def matrix(self) -> np.ndarray:
        """Canonical RREF matrix (possibly with zero rows count 0)."""
        if not self.rows:
            return np.zeros((0, self.ncols), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)


def rref(rows, p: int, ncols: int | None = None) -> np.ndarray:
    """Canonical reduced row echelon form of the given row collection."""
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty row collection")
        ncols = rows[0].shape[0]
    basis = EchelonBasis(p, ncols)
    for r in rows:
        basis.insert(r)
    return basis.matrix()


def solve_unique(A, b, p: int) -> np.ndarray | None:
    """Solve A x = b over F_p for A with full column rank.

    Returns None when the system is inconsistent; raises ValueError when the
    columns of A are dependent (the callers rely on uniqueness).
    """
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    m, k = A.shape
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    basis = EchelonBasis(p, k + 1)
    for row in aug:
        basis.insert(row)
    if k in basis.pivots:
        return None
    if basis.dim < k:
        raise ValueError("coefficient matrix does not have full column rank")
    x = np.zeros(k, dtype=np.int64)
    for piv, row in zip(basis.pivots, basis.rows):
        x[piv] = row[k]
    return x

"""Dense linear algebra over F_p on int64 arrays.

Everything reduces to one in-place row-echelon kernel.  Two implementations
exist: a numba ``@njit`` loop nest and a vectorised numpy version.  The
numba one is used when numba imports and ``WPTATE_DISABLE_NUMBA`` is unset;
:func:`set_backend` switches at runtime (the benchmark and the tests use it).

All results are deterministic: pivots are the lexicographically first
independent columns.
"""
from __future__ import annotations

import numpy as np

from . import _config
from .field import xgcd

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "pivot_columns",
    "solve",
    "extend_basis",
    "set_backend",
    "get_backend",
]


def _inv_scalar(a: int, p: int) -> int:
    return xgcd(int(a), p)[1] % p


def _rref_numpy(A: np.ndarray, p: int) -> np.ndarray:
    m, n = A.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(A[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        inv = _inv_scalar(A[row, col], p)
        A[row, col:] = A[row, col:] * inv % p
        f = A[:, col].copy()
        f[row] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            A[rows, col:] = (A[rows, col:] - np.outer(f[rows], A[row, col:])) % p
        pivots.append(col)
        row += 1
    return np.asarray(pivots, dtype=np.int64)


if _config.HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _inv_mod(a, p):
        # extended Euclid; a is a nonzero residue
        r0, r1 = p, a
        t0, t1 = 0, 1
        while r1 != 0:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            t0, t1 = t1, t0 - q * t1
        t0 %= p
        return t0

    @njit(cache=True)
    def _rref_numba(A, p):
        m, n = A.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        row = 0
        for col in range(n):
            if row >= m:
                break
            piv = -1
            for r in range(row, m):
                if A[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != row:
                for c in range(col, n):
                    tmp = A[row, c]
                    A[row, c] = A[piv, c]
                    A[piv, c] = tmp
            inv = _inv_mod(A[row, col], p)
            for c in range(col, n):
                A[row, c] = A[row, c] * inv % p
            for r in range(m):
                if r == row:
                    continue
                f = A[r, col]
                if f == 0:
                    continue
                for c in range(col, n):
                    A[r, c] = (A[r, c] - f * A[row, c]) % p
            pivots[row] = col
            row += 1
        return pivots[:row]

else:  # pragma: no cover
    _rref_numba = None


_backend = "numba" if _config.USE_NUMBA else "numpy"


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _config.HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


def get_backend() -> str:
    return _backend


def _rref_inplace(A: np.ndarray, p: int) -> np.ndarray:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return np.zeros(0, dtype=np.int64)
    if _backend == "numba":
        return _rref_numba(A, np.int64(p))
    return _rref_numpy(A, p)


def _as_work(A, p: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(A, dtype=np.int64) % p)


def rref(A, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of ``A`` mod p and its pivot columns."""
    R = _as_work(A, p)
    piv = _rref_inplace(R, p)
    return R, tuple(int(c) for c in piv)


def rank(A, p: int) -> int:
    return len(rref(A, p)[1])


def pivot_columns(A, p: int) -> tuple[int, ...]:
    return rref(A, p)[1]


def nullspace(A, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of an (ncols x k) matrix.

    One basis vector per free column f, with a 1 in position f and zeros in
    the other free positions.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, c in enumerate(piv):
            N[c, k] = -R[i, f] % p
    return N


def solve(B, v, p: int) -> np.ndarray | None:
    """Coordinates x with B x = v, or None if v is not in the column span.

    ``B`` must have linearly independent columns.  ``v`` may be a matrix, in
    which case all its columns must lie in the span.
    """
    B = np.asarray(B, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    vec = v.ndim == 1
    V = v.reshape(-1, 1) if vec else v
    k = B.shape[1]
    if k == 0:
        if np.any(V % p):
            return None
        X = np.zeros((0, V.shape[1]), dtype=np.int64)
        return X[:, 0] if vec else X
    R, piv = rref(np.hstack([B, V]), p)
    if tuple(c for c in piv if c < k) != tuple(range(k)):
        raise ValueError("basis columns are linearly dependent")
    if len(piv) > k:
        return None
    X = R[:k, k:]
    return X[:, 0] if vec else X


def extend_basis(U, Z, p: int) -> list[int]:
    """Indices of columns of ``Z`` that extend span(U) to span(U + Z).

    The choice is the lexicographically first one.
    """
    U = np.asarray(U, dtype=np.int64)
    Z = np.asarray(Z, dtype=np.int64)
    if Z.shape[1] == 0:
        return []
    if U.ndim != 2 or U.shape[1] == 0:
        return list(pivot_columns(Z, p))
    ku = U.shape[1]
    piv = pivot_columns(np.hstack([U, Z]), p)
    return [c - ku for c in piv if c >= ku]

"""The weighted BGG functor R on a window of degrees, and the finite piece.

R(M) = ⊕_d M_d ⊗ ω_E(-d; 0) with ∂(m ⊗ f) = Σ_i x_i m ⊗ e_i f.  The summand
for degree d is generated in bidegree (a + d; n + 1); a basis vector is
labelled (d, k, T) for the k-th standard monomial of M_d times e_T.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dmod import DifferentialModule
from .extalg import ExtAlgebra, ext_sign
from .polyring import ModulePresentation
from .resolution import hilbert, multiplication_map

__all__ = ["BGGWindow", "FinitePiece", "bgg_window", "finite_piece"]


@dataclass
class BGGWindow:
    module: ModulePresentation
    lo: int
    hi: int
    dm: DifferentialModule
    labels: dict  # bidegree -> list of (d, k, T)

    def rank_in_degree(self, d: int) -> int:
        return hilbert(self.module, d)

    def position(self, b, label) -> int:
        return self._pos[b][label]

    def __post_init__(self):
        self._pos = {b: {t: i for i, t in enumerate(lst)} for b, lst in self.labels.items()}


def _label_degree(A: ExtAlgebra, d: int, T: int) -> tuple:
    a = A.ring.a
    n1 = A.nvars
    dd, dj = A.subset_degree(T)
    return (a + d + dd, n1 + dj)


def bgg_window(M: ModulePresentation, lo: int, hi: int, truncate: bool = True) -> BGGWindow:
    """⊕_{d=lo}^{hi} M_d ⊗ ω_E(-d;0) with the BGG differential.

    Terms of ∂ that would land in degrees above ``hi`` are dropped.
    """
    if lo > hi:
        raise ValueError("empty window: lo > hi")
    R = M.ring
    A = ExtAlgebra(R)
    p = R.p
    labels: dict = defaultdict(list)
    for d in range(lo, hi + 1):
        for k in range(hilbert(M, d)):
            for T in A.subsets():
                labels[_label_degree(A, d, T)].append((d, k, T))
    labels = {b: lst for b, lst in sorted(labels.items())}
    pos = {b: {t: i for i, t in enumerate(lst)} for b, lst in labels.items()}
    D = DifferentialModule(
        A, {b: len(lst) for b, lst in labels.items()}, flag_offset=R.sigma + 1, labels=labels
    )
    for b, lst in labels.items():
        b1 = (b[0], b[1] - 1)
        blk = np.zeros((D.dim(b1), len(lst)), dtype=np.int64)
        for col, (d, k, T) in enumerate(lst):
            for i, w in enumerate(R.weights):
                bit = 1 << i
                s = ext_sign(bit, T)
                if not s or d + w > hi:
                    continue
                X = multiplication_map(M, i, d)
                for k2 in np.flatnonzero(X[:, k]):
                    row = pos[b1][(d + w, int(k2), T | bit)]
                    blk[row, col] = (blk[row, col] + s * X[k2, k]) % p
        if np.any(blk):
            D.diff[b] = blk
        for i in range(R.nvars):
            bit = 1 << i
            bi = (b[0] - R.weights[i], b[1] - 1)
            ab = np.zeros((D.dim(bi), len(lst)), dtype=np.int64)
            for col, (d, k, T) in enumerate(lst):
                s = ext_sign(bit, T)
                if s:
                    ab[pos[bi][(d, k, T | bit)], col] = s % p
            if np.any(ab):
                D.action[i][b] = ab
    return BGGWindow(M, lo, hi, D, labels)


@dataclass
class FinitePiece:
    """N + ∂N inside an ambient window, with its basis recorded in ambient
    coordinates (``embedding[b]`` has one column per basis vector)."""

    dm: DifferentialModule
    window: BGGWindow
    r: int
    top: int  # last degree of N
    embedding: dict

    def degrees_of(self, b, v: np.ndarray) -> set:
        """Polynomial degrees d of the ambient components of v."""
        amb = self.embedding[b] @ v % self.dm.p
        labels = self.window.labels[b]
        return {labels[t][0] for t in np.flatnonzero(amb)}


def finite_piece(M: ModulePresentation, r: int, extra: int = 0) -> FinitePiece:
    """The subquotient N + ∂N of R(M_{≥r}) with N = ⊕_{d=r}^{r+σ+1} M_d ⊗ ω_E(-d;0).

    The ambient window is [r, r + σ + 1 + a_n + extra].  A basis of each
    bidegree is the N coordinates followed by the images ∂n whose components
    outside N are independent (first pivots).
    """
    R = M.ring
    p = R.p
    top = r + R.sigma + 1
    hi = top + R.weights[-1] + extra
    W = bgg_window(M, r, hi)
    D = W.dm
    A = D.algebra
    n_idx: dict = {}
    out_idx: dict = {}
    for b, lst in W.labels.items():
        n_idx[b] = [t for t, lab in enumerate(lst) if lab[0] <= top]
        out_idx[b] = [t for t, lab in enumerate(lst) if lab[0] > top]
    emb: dict = {}
    boundary_cols: dict = {}
    for b in W.labels:
        cols = [np.eye(D.dim(b), dtype=np.int64)[:, n_idx[b]]]
        up = (b[0], b[1] + 1)
        bnd = np.zeros((D.dim(b), 0), dtype=np.int64)
        if D.dim(up) and n_idx.get(up):
            dN = D.diff_block(up)[:, n_idx[up]]
            outer = dN[out_idx[b], :]
            keep = list(linalg.pivot_columns(outer, p)) if outer.size else []
            bnd = dN[:, keep]
        boundary_cols[b] = bnd.shape[1]
        cols.append(bnd)
        E = np.hstack(cols)
        if E.shape[1]:
            emb[b] = E
    dims = {b: E.shape[1] for b, E in emb.items()}
    V = DifferentialModule(A, dims, flag_offset=D.flag_offset)
    for b, E in emb.items():
        nN = E.shape[1] - boundary_cols[b]
        b1 = (b[0], b[1] - 1)
        img = D.diff_block(b) @ E % p
        img[:, nN:] = 0  # ∂∂n = 0; the window would drop terms past hi
        if np.any(img):
            V.diff[b] = _express(emb.get(b1), img, p, b1)
        for i in range(A.nvars):
            bi = (b[0] - R.weights[i], b[1] - 1)
            im = D.act_block(i, b) @ E % p
            if np.any(im):
                V.action[i][b] = _express(emb.get(bi), im, p, bi)
    return FinitePiece(V, W, r, top, emb)


def _express(basis, vectors, p, where):
    if basis is None:
        raise AssertionError(f"N + dN is not closed: image in empty bidegree {where}")
    X = linalg.solve(basis, vectors, p)
    if X is None:
        raise AssertionError(f"N + dN is not closed under the action at {where}")
    return X % p

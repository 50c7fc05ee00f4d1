"""Sheaf cohomology on weighted projective stacks via Tate resolutions.

For a module M representing a sheaf F, pick r (the regularity, or one more
when M has m-torsion).  Twists j >= r are read off M directly, entries with
r <= i + j vanish, and the remaining entries come from the minimal free flag
resolution of the finite piece N + ∂N of R(M_{>=r}): h^i(F(j)) is the socle
dimension of that resolution in bidegree (j; -i-1).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bgg import FinitePiece, finite_piece
from .dmod import DEFAULT_CAP, FlagResolution, ResourceLimitError, ZeroHomologyError, resolve_twisted_flag
from .extalg import format_summands, socle_counts
from .polyring import ModulePresentation
from .resolution import ZeroModuleError, h0m_vanishes, hilbert, is_zero_module, multiplication_map, regularity

__all__ = [
    "choose_r",
    "CohomologyQuery",
    "CohomologyTable",
    "sheaf_cohomology",
    "TateWindow",
    "tate_window",
    "validate_window",
    "ResourceLimitError",
    "DIMENSION_COUNT",
    "REGULARITY_VANISHING",
    "RESOLUTION_SOCLE",
    "ABOVE_DIMENSION",
]

DIMENSION_COUNT = "dimension-count"
REGULARITY_VANISHING = "regularity-vanishing"
RESOLUTION_SOCLE = "resolution-socle"
ABOVE_DIMENSION = "above-dimension"


def choose_r(M: ModulePresentation) -> int:
    """reg(M), or reg(M) + 1 when H^0_m(M) != 0."""
    r = regularity(M)
    return r if h0m_vanishes(M) else r + 1


def _check_r(M: ModulePresentation, r: int) -> None:
    lo = choose_r(M)
    if r < lo:
        raise ValueError(f"r = {r} is too small for this module (need r >= {lo})")


@dataclass
class CohomologyQuery:
    module: ModulePresentation
    j_min: int
    j_max: int
    i_max: int | None = None
    r: int | None = None

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise ValueError("empty twist range")
        if self.i_max is None:
            self.i_max = self.module.ring.n
        if self.i_max < 0:
            raise ValueError("i_max must be nonnegative")


@dataclass
class CohomologyTable:
    weights: tuple
    char: int
    r_used: int
    j_range: tuple
    i_max: int
    entries: dict = field(default_factory=dict)  # (i, j) -> int
    provenance: dict = field(default_factory=dict)  # (i, j) -> str

    def __getitem__(self, ij) -> int:
        return self.entries[ij]

    def row(self, i: int) -> list:
        """h^i(F(j)) for j descending, as the tables are printed."""
        lo, hi = self.j_range
        return [self.entries[(i, j)] for j in range(hi, lo - 1, -1)]


def _resolve(P: FinitePiece, max_flag: int, cap: int) -> FlagResolution | None:
    if P.dm.total_dim > cap:
        raise ResourceLimitError(f"finite piece has {P.dm.total_dim} basis vectors (cap {cap})")
    try:
        return resolve_twisted_flag(P.dm, max_flag=max_flag, cap=cap)
    except ZeroHomologyError:
        return None


def sheaf_cohomology(q: CohomologyQuery, cap: int = DEFAULT_CAP) -> CohomologyTable:
    M = q.module
    R = M.ring
    if is_zero_module(M):
        raise ZeroModuleError("the zero module has no regularity; its sheaf is zero")
    if q.r is None:
        r = choose_r(M)
    else:
        _check_r(M, q.r)
        r = q.r
    T = CohomologyTable(tuple(R.weights), R.p, r, (q.j_min, q.j_max), q.i_max)
    need = []
    for i in range(q.i_max + 1):
        for j in range(q.j_min, q.j_max + 1):
            if i > R.n:
                T.entries[(i, j)] = 0
                T.provenance[(i, j)] = ABOVE_DIMENSION
            elif j >= r:
                T.entries[(i, j)] = hilbert(M, j) if i == 0 else 0
                T.provenance[(i, j)] = DIMENSION_COUNT if i == 0 else REGULARITY_VANISHING
            elif r <= i + j:
                T.entries[(i, j)] = 0
                T.provenance[(i, j)] = REGULARITY_VANISHING
            else:
                need.append((i, j))
                T.provenance[(i, j)] = RESOLUTION_SOCLE
    if need:
        max_flag = max(-i - j for i, j in need)
        res = _resolve(finite_piece(M, r), max_flag, cap)
        soc = socle_counts(res.free.module) if res is not None else {}
        for i, j in need:
            T.entries[(i, j)] = soc.get((j, -i - 1), 0)
    T.entries = dict(sorted(T.entries.items()))
    T.provenance = dict(sorted(T.provenance.items()))
    return T


# ---------------------------------------------------------------- windows


@dataclass
class TateWindow:
    """Pieces T(F)_ℓ of a Tate resolution as {ℓ: Counter{(c, s): mult}}.

    ``resolution_flags`` are the ℓ produced by the flag resolution; the other
    pieces are R-side summands ω_E(-d;0)^{dim M_d}.  ``arrows`` counts nonzero
    differential entries per (ℓ_from, ℓ_to).
    """

    r: int
    sigma: int
    pieces: dict = field(default_factory=dict)
    resolution_flags: tuple = ()
    arrows: Counter = field(default_factory=Counter)

    def piece(self, ell: int) -> Counter:
        return self.pieces.get(ell, Counter())

    def render(self) -> str:
        parts = [format_summands(self.pieces[ell]) for ell in sorted(self.pieces, reverse=True)]
        return " -> ".join(parts) if parts else "0"

    def jumps(self) -> set:
        return {a - b for a, b in self.arrows}


def tate_window(M: ModulePresentation, steps: int, r: int | None = None, cap: int = DEFAULT_CAP) -> TateWindow:
    """Flags -r+1 .. -r+steps from the resolution, plus R-side pieces for
    degrees r .. r+σ."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    R = M.ring
    if r is None:
        r = choose_r(M)
    else:
        _check_r(M, r)
    W = TateWindow(r, R.sigma)
    P = finite_piece(M, r)
    res = _resolve(P, -r + steps, cap)
    flags = []
    if res is not None:
        F = res.free
        W.pieces.update({ell: Counter(c) for ell, c in F.pieces().items()})
        flags = sorted(F.pieces())
        for g, img in enumerate(F.images):
            for (h, _T), _c in img.items():
                W.arrows[(F.flag(g), F.flag(h))] += 1
        for g in range(F.rank):
            b = F.degrees[g]
            if P.dm.dim(b) == 0:
                continue
            for d in sorted(P.degrees_of(b, res.eps[g])):
                W.arrows[(F.flag(g), -d)] += 1
    W.resolution_flags = tuple(flags)
    for d in range(r, r + R.sigma + 1):
        h = hilbert(M, d)
        if h:
            W.pieces[-d] = Counter({(-d, 0): h})
            for i, w in enumerate(R.weights):
                X = multiplication_map(M, i, d)
                nz = int(np.count_nonzero(X))
                if nz and d + w <= r + R.sigma:
                    W.arrows[(-d, -d - w)] += nz
    W.pieces = dict(sorted(W.pieces.items()))
    return W


def validate_window(w: TateWindow, r: int, sigma: int) -> list:
    """Violations of the summand constraint and of the jump bound."""
    out = []
    for ell in w.resolution_flags:
        for (c, s), mult in w.piece(ell).items():
            i, j = s, -c
            if not -i - j > -r:
                out.append(f"summand w_E({c};{s}) at l={ell} has -i-j <= -r")
            if i == 0 and not j < r:
                out.append(f"summand w_E({c};{s}) at l={ell} has i=0 and j >= r")
    for (a, b), cnt in sorted(w.arrows.items()):
        drop = a - b
        if cnt and not 1 <= drop <= sigma + 1:
            out.append(f"differential l={a} -> l={b} drops the filtration by {drop}")
    return out

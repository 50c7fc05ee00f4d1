"""Graded pieces, free resolutions, Betti numbers and regularity over S.

Resolutions are computed with Schreyer's algorithm (the syzygies of a Groebner
basis form a Groebner basis for the induced order) and then minimalized by
cancelling unit entries.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .field import xgcd
from .groebner import (
    GroebnerBasis,
    add_into,
    buchberger,
    elimination_order,
    make_monic,
    reduce,
    shift,
    top_order,
)
from .polyring import (
    ModulePresentation,
    Vector,
    WeightedRing,
    mono_div,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)

__all__ = [
    "ZeroModuleError",
    "groebner_basis",
    "is_zero_module",
    "graded_piece_basis",
    "coordinates",
    "multiplication_map",
    "hilbert",
    "hilbert_function",
    "FreeResolutionS",
    "BettiTable",
    "free_resolution",
    "betti",
    "regularity",
    "h0m_vanishes",
    "truncation",
]


class ZeroModuleError(ValueError):
    """Raised where an invariant is undefined for the zero module."""


def groebner_basis(M: ModulePresentation) -> GroebnerBasis:
    G = M.cache.get("gb")
    if G is None:
        G = M.cache["gb"] = buchberger(M.relations, M.ring, M.ambient_degrees)
    return G


def is_zero_module(M: ModulePresentation) -> bool:
    G = groebner_basis(M)
    one = M.ring.one()
    units = {c for (m, c) in G.leads if m == one}
    return len(units) == M.rank


# ---------------------------------------------------------------- graded pieces


def graded_piece_basis(M: ModulePresentation, d: int) -> list:
    """Standard terms ``(monomial, generator)`` spanning M_d, largest first."""
    cache = M.cache.setdefault("basis", {})
    if d in cache:
        return cache[d]
    G = groebner_basis(M)
    R = M.ring
    out = []
    for k, b in enumerate(M.ambient_degrees):
        for m in monomials_of_degree(R, d - b):
            if G.is_standard((m, k)):
                out.append((m, k))
    key = top_order(R)
    out.sort(key=key, reverse=True)
    cache[d] = out
    return out


def hilbert(M: ModulePresentation, d: int) -> int:
    return len(graded_piece_basis(M, d))


def hilbert_function(M: ModulePresentation, lo: int, hi: int) -> list[int]:
    return [hilbert(M, d) for d in range(lo, hi + 1)]


def _index(M: ModulePresentation, d: int) -> dict:
    cache = M.cache.setdefault("index", {})
    if d not in cache:
        cache[d] = {t: i for i, t in enumerate(graded_piece_basis(M, d))}
    return cache[d]


def coordinates(M: ModulePresentation, v: Vector, d: int) -> np.ndarray:
    """Coordinates of the class of the degree-``d`` vector ``v`` in M_d."""
    idx = _index(M, d)
    out = np.zeros(len(idx), dtype=np.int64)
    for t, c in groebner_basis(M).normal_form(v).items():
        out[idx[t]] = c
    return out


def multiplication_map(M: ModulePresentation, i: int, d: int) -> np.ndarray:
    """Matrix of x_i : M_d -> M_{d+a_i} in standard-monomial bases."""
    cache = M.cache.setdefault("mult", {})
    if (i, d) in cache:
        return cache[(i, d)]
    R = M.ring
    src = graded_piece_basis(M, d)
    e = d + R.weights[i]
    A = np.zeros((hilbert(M, e), len(src)), dtype=np.int64)
    xi = R.var(i)
    for col, (m, k) in enumerate(src):
        A[:, col] = coordinates(M, {(mono_mul(m, xi), k): 1}, e)
    A.setflags(write=False)
    cache[(i, d)] = A
    return A


# ---------------------------------------------------------------- resolutions


@dataclass
class BettiTable:
    entries: dict  # (i, j) -> beta_ij

    def __getitem__(self, ij) -> int:
        return self.entries.get(ij, 0)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def numerator(self) -> dict:
        """Coefficients of sum (-1)^i beta_ij t^j."""
        num: Counter = Counter()
        for (i, j), b in self.entries.items():
            num[j] += (-1) ** i * b
        return {j: c for j, c in sorted(num.items()) if c}

    def __str__(self):
        if not self.entries:
            return "0"
        cols = range(self.length + 1)
        rows = sorted({j - i for i, j in self.entries})
        lines = ["      " + " ".join(f"{i:>4}" for i in cols)]
        for s in rows:
            vals = [self.entries.get((i, i + s), 0) for i in cols]
            lines.append(f"{s:>4}: " + " ".join(f"{v if v else '.':>4}" for v in vals))
        return "\n".join(lines)


@dataclass
class FreeResolutionS:
    """F_0 <- F_1 <- ... ; ``maps[k]`` is d_k : F_k -> F_{k-1} as a list of
    column vectors (entries keyed by (monomial, row)); ``maps[0]`` is empty."""

    ring: WeightedRing
    degrees: list = field(default_factory=list)
    maps: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.degrees) - 1

    def ranks(self) -> tuple:
        return tuple(len(d) for d in self.degrees)

    def betti(self) -> BettiTable:
        e: Counter = Counter()
        for i, degs in enumerate(self.degrees):
            for j in degs:
                e[(i, j)] += 1
        return BettiTable(dict(sorted(e.items())))

    def compose_is_zero(self) -> bool:
        p = self.ring.p
        for k in range(2, len(self.maps)):
            A, B = self.maps[k - 1], self.maps[k]
            for col in B:
                acc: dict = {}
                for (m, c), x in col.items():
                    add_into(acc, shift(A[c], m, x, p), p)
                if acc:
                    return False
        return True

    def is_minimal(self) -> bool:
        one = self.ring.one()
        return not any(m == one for d in self.maps[1:] for col in d for (m, _) in col)


def _induced_key(prev_key, leads):
    cache: dict = {}

    def key(t):
        k = cache.get(t)
        if k is None:
            m, c = t
            lm, lc = leads[c]
            k = cache[t] = prev_key((mono_mul(m, lm), lc)) + (-c,)
        return k

    return key


def _lex_desc(m):
    return tuple(-e for e in m)


def _schreyer_syzygies(gens, leads, key, p):
    """Syzygies of the Groebner basis ``gens`` whose leads are minimal per
    source element; returns (vectors, leads) sorted for the next round."""
    by_comp: dict = {}
    for i, (_, c) in enumerate(leads):
        by_comp.setdefault(c, []).append(i)
    out = []
    for i in range(len(gens)):
        cands = []
        for j in by_comp[leads[i][1]]:
            if j <= i:
                continue
            L = mono_lcm(leads[i][0], leads[j][0])
            cands.append((mono_div(L, leads[i][0]), j, mono_div(L, leads[j][0])))
        kept = []
        for mi, j, mj in cands:
            if any(
                (mk != mi or k < j) and all(a <= b for a, b in zip(mk, mi))
                for mk, k, _ in cands
                if k != j
            ):
                continue
            kept.append((mi, j, mj))
        for mi, j, mj in kept:
            s = shift(gens[i], mi, 1, p)
            add_into(s, shift(gens[j], mj, 1, p), p, -1)
            rem, quo = reduce(s, gens, leads, key, p, track=True)
            if rem:
                raise ArithmeticError("S-vector of a Groebner basis did not reduce to zero")
            tau = {(mi, i): 1}
            add_into(tau, {(mj, j): 1}, p, -1)
            for k, q in quo.items():
                add_into(tau, {(m, k): c for m, c in q.items()}, p, -1)
            out.append((tau, (mi, i)))
    out.sort(key=lambda t: (t[1][1], _lex_desc(t[1][0])))
    return [t[0] for t in out], [t[1] for t in out]


def _column_degree(col, degs, R):
    (m, c) = next(iter(col))
    return R.degree(m) + degs[c]


def _schreyer(M: ModulePresentation) -> FreeResolutionS:
    R = M.ring
    p = R.p
    G = groebner_basis(M)
    degrees = [list(M.ambient_degrees)]
    maps: list = [[]]
    gens = [dict(g) for g in G.generators]
    leads = list(G.leads)
    key = G.key
    # level-1 columns in Cor. 15.11-style order, so syzygies terminate
    order = sorted(range(len(gens)), key=lambda i: (leads[i][1], _lex_desc(leads[i][0])))
    gens = [gens[i] for i in order]
    leads = [leads[i] for i in order]
    cap = R.nvars + 3
    while gens:
        if len(maps) > cap:
            raise ArithmeticError("Schreyer resolution failed to terminate")
        degs = [_column_degree(g, degrees[-1], R) for g in gens]
        degrees.append(degs)
        maps.append(gens)
        syz, slead = _schreyer_syzygies(gens, leads, key, p)
        key = _induced_key(key, leads)
        gens = [make_monic(v, lt, p) for v, lt in zip(syz, slead)]
        leads = slead
    return FreeResolutionS(R, degrees, maps)


def _drop_row(cols, r):
    return [{(m, c - (c > r)): x for (m, c), x in col.items() if c != r} for col in cols]


def _minimalize(F: FreeResolutionS) -> FreeResolutionS:
    R = F.ring
    p = R.p
    one = R.one()
    degrees = [list(d) for d in F.degrees]
    maps = [[dict(c) for c in d] for d in F.maps]
    k = 1
    while k < len(maps):
        A = maps[k]
        hit = None
        for c, col in enumerate(A):
            for (m, r), x in col.items():
                if m == one:
                    hit = (r, c, x)
                    break
            if hit:
                break
        if hit is None:
            k += 1
            continue
        r, c, u = hit
        inv = xgcd(u, p)[1] % p
        # column operations on d_k clear row r; compensate rows of d_{k+1}
        factors = {}
        for c2, col in enumerate(A):
            if c2 == c:
                continue
            a = {m: x for (m, rr), x in col.items() if rr == r}
            if not a:
                continue
            a = {m: x * inv % p for m, x in a.items()}
            factors[c2] = a
            for m, x in a.items():
                add_into(col, shift(A[c], m, x, p), p, -1)
        if k + 1 < len(maps):
            for col in maps[k + 1]:
                extra: dict = {}
                for (m, rr), x in col.items():
                    if rr in factors:
                        for fm, fx in factors[rr].items():
                            t = (mono_mul(m, fm), c)
                            extra[t] = (extra.get(t, 0) + x * fx) % p
                add_into(col, extra, p)
                if any(rr == c for (_, rr) in col):
                    raise ArithmeticError("minimalization left a nonzero row")
        # row operations on d_k clear column c; compensate columns of d_{k-1}
        w = {}
        for (m, rr), x in A[c].items():
            if rr != r:
                w.setdefault(rr, {})[m] = x * inv % p
        for col in A:
            a = {m: x for (m, rr), x in col.items() if rr == r}
            if not a:
                continue
            for rr, wr in w.items():
                for wm, wx in wr.items():
                    for am, ax in a.items():
                        t = (mono_mul(wm, am), rr)
                        y = (col.get(t, 0) - wx * ax) % p
                        if y:
                            col[t] = y
                        else:
                            col.pop(t, None)
        if k - 1 >= 1:
            C = maps[k - 1]
            for rr, wr in w.items():
                for wm, wx in wr.items():
                    add_into(C[r], shift(C[rr], wm, wx, p), p)
            if C[r]:
                raise ArithmeticError("minimalization left a nonzero column")
            del C[r]
        del A[c]
        maps[k] = _drop_row(A, r)
        degrees[k].pop(c)
        degrees[k - 1].pop(r)
        if k + 1 < len(maps):
            maps[k + 1] = _drop_row(maps[k + 1], c)
    while len(degrees) > 1 and not degrees[-1]:
        degrees.pop()
        maps.pop()
    return FreeResolutionS(R, degrees, maps)


def free_resolution(M: ModulePresentation) -> FreeResolutionS:
    """Minimal graded free resolution of M (cached on the presentation)."""
    F = M.cache.get("resolution")
    if F is None:
        F = M.cache["resolution"] = _minimalize(_schreyer(M))
    return F


def betti(M: ModulePresentation) -> BettiTable:
    return free_resolution(M).betti()


def regularity(M: ModulePresentation) -> int:
    """max{j - i : beta_ij != 0} + n + 1 - a."""
    if is_zero_module(M):
        raise ZeroModuleError("regularity of the zero module is undefined")
    R = M.ring
    B = betti(M)
    return max(j - i for (i, j) in B.entries) + R.nvars - R.a


def h0m_vanishes(M: ModulePresentation) -> bool:
    """True iff no nonzero element of M is killed by every variable."""
    if is_zero_module(M):
        return True
    R = M.ring
    p = R.p
    for d in range(min(M.ambient_degrees), regularity(M) + 1):
        n = hilbert(M, d)
        if not n:
            continue
        stacked = np.vstack([multiplication_map(M, i, d) for i in range(R.nvars)])
        if linalg.rank(stacked, p) < n:
            return False
    return True


def truncation(M: ModulePresentation, e: int) -> ModulePresentation:
    """A presentation of M_{>=e}.

    Generators are the standard terms in degrees e .. max(e + a_n - 1, b_max);
    the relations are the kernel of the induced map onto M, computed with an
    elimination order in which the ambient module of M dominates.
    """
    R = M.ring
    p = R.p
    hi = max(e + R.weights[-1] - 1, max(M.ambient_degrees))
    gens = []
    degs = []
    for d in range(e, hi + 1):
        for t in graded_piece_basis(M, d):
            gens.append(t)
            degs.append(d)
    k = M.rank
    comp_degrees = tuple(M.ambient_degrees) + tuple(degs)
    rels = [dict(v) for v in M.relations]
    for g, t in enumerate(gens):
        rels.append({(R.one(), k + g): 1, t: p - 1})
    G = buchberger(rels, R, comp_degrees, key=elimination_order(R, k))
    kernel = []
    for v, lt in zip(G.generators, G.leads):
        if lt[1] >= k:
            kernel.append({(m, c - k): x for (m, c), x in v.items()})
    return ModulePresentation(R, tuple(degs), kernel)


"""Buchberger's algorithm for homogeneous submodules of free S-modules.

A term order is any callable ``key(term) -> tuple[int, ...]`` that is a
module monomial order (larger key = larger term).  The default is
term-over-position weighted grevlex, lower component index winning ties.
Basis elements are kept monic.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Sequence

from .field import xgcd
from .polyring import (
    InhomogeneousError,
    Vector,
    WeightedRing,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    vector_degree,
)

KeyFn = Callable[[tuple], tuple]


def top_order(R: WeightedRing) -> KeyFn:
    cache: dict = {}

    def key(t):
        k = cache.get(t)
        if k is None:
            k = cache[t] = R.mono_key(t[0]) + (-t[1],)
        return k

    return key


def elimination_order(R: WeightedRing, first_eliminated: int) -> KeyFn:
    """Components ``< first_eliminated`` dominate all others, TOP inside each block."""
    cache: dict = {}

    def key(t):
        k = cache.get(t)
        if k is None:
            k = cache[t] = (1 if t[1] < first_eliminated else 0,) + R.mono_key(t[0]) + (-t[1],)
        return k

    return key


def leading_term(v: Vector, key: KeyFn) -> tuple:
    return max(v, key=key)


def make_monic(v: Vector, lt: tuple, p: int) -> Vector:
    c = v[lt]
    if c == 1:
        return v
    inv = xgcd(c, p)[1] % p
    return {t: x * inv % p for t, x in v.items()}


def shift(v: Vector, mono: tuple, c: int, p: int) -> Vector:
    c %= p
    if not c:
        return {}
    return {(mono_mul(m, mono), k): x * c % p for (m, k), x in v.items()}


def add_into(v: Vector, w: Vector, p: int, scale: int = 1) -> Vector:
    for t, x in w.items():
        y = (v.get(t, 0) + scale * x) % p
        if y:
            v[t] = y
        else:
            v.pop(t, None)
    return v


def _neg(k: tuple) -> tuple:
    return tuple(-x for x in k)


def reduce(
    v: Vector,
    basis: Sequence[Vector],
    leads: Sequence[tuple],
    key: KeyFn,
    p: int,
    track: bool = False,
    full: bool = True,
):
    """Divide ``v`` by monic ``basis`` (with leading terms ``leads``).

    Returns the remainder, or ``(remainder, quotients)`` when ``track`` is
    set, where ``quotients[i]`` is a polynomial dict with
    v = sum_i quotients[i] * basis[i] + remainder.  With ``full=False`` only
    the leading term is reduced repeatedly.
    """
    by_comp = defaultdict(list)
    for i, (m, c) in enumerate(leads):
        by_comp[c].append((i, m))
    v = dict(v)
    heap = [(_neg(key(t)), t) for t in v]
    heapq.heapify(heap)
    rem: Vector = {}
    quo: dict = defaultdict(dict)
    while heap:
        _, t = heapq.heappop(heap)
        c = v.pop(t, 0)
        if not c:
            continue
        red = None
        for i, m in by_comp.get(t[1], ()):
            if mono_divides(m, t[0]):
                red = i
                break
        if red is None:
            rem[t] = c
            if not full:
                rem.update(v)
                break
            continue
        q = mono_div(t[0], leads[red][0])
        for (gm, gc), x in basis[red].items():
            s = (mono_mul(gm, q), gc)
            if s == t:
                continue
            old = v.get(s)
            nv = ((old or 0) - c * x) % p
            if nv:
                if old is None:
                    heapq.heappush(heap, (_neg(key(s)), s))
                v[s] = nv
            elif old is not None:
                del v[s]
        if track:
            qd = quo[red]
            qd[q] = (qd.get(q, 0) + c) % p
            if not qd[q]:
                del qd[q]
    if track:
        return rem, dict(quo)
    return rem


@dataclass
class GroebnerBasis:
    ring: WeightedRing
    comp_degrees: tuple
    key: KeyFn
    generators: list
    leads: list

    def __len__(self):
        return len(self.generators)

    def normal_form(self, v: Vector) -> Vector:
        return reduce(v, self.generators, self.leads, self.key, self.ring.p)

    def contains(self, v: Vector) -> bool:
        return not self.normal_form(v)

    def is_standard(self, t: tuple) -> bool:
        m, c = t
        return not any(lc == c and mono_divides(lm, m) for (lm, lc) in self.leads)


def s_vector(g1, lt1, g2, lt2, p):
    L = mono_lcm(lt1[0], lt2[0])
    s = shift(g1, mono_div(L, lt1[0]), 1, p)
    return add_into(s, shift(g2, mono_div(L, lt2[0]), 1, p), p, -1)


def buchberger(
    relations: Sequence[Vector],
    R: WeightedRing,
    comp_degrees: Sequence[int],
    key: KeyFn | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by ``relations``.

    Works degree by degree, which is valid because the input is homogeneous.
    """
    p = R.p
    comp_degrees = tuple(comp_degrees)
    key = key or top_order(R)
    pending: dict = defaultdict(list)
    for v in relations:
        v = {t: x % p for t, x in v.items() if x % p}
        if not v:
            continue
        d = vector_degree(v, R, comp_degrees)
        if d is None:
            raise InhomogeneousError("Groebner basis input must be homogeneous")
        pending[d].append(("v", v))

    gens: list = []
    leads: list = []
    while pending:
        d = min(pending)
        items = pending.pop(d)
        for item in items:
            if item[0] == "v":
                s = item[1]
            else:
                _, i, j = item
                s = s_vector(gens[i], leads[i], gens[j], leads[j], p)
            r = reduce(s, gens, leads, key, p)
            if not r:
                continue
            lt = leading_term(r, key)
            r = make_monic(r, lt, p)
            new = len(gens)
            for k, lk in enumerate(leads):
                if lk[1] == lt[1]:
                    L = mono_lcm(lk[0], lt[0])
                    pending[R.degree(L) + comp_degrees[lt[1]]].append(("pair", k, new))
            gens.append(r)
            leads.append(lt)
    return _interreduce(gens, leads, R, comp_degrees, key)


def _interreduce(gens, leads, R, comp_degrees, key) -> GroebnerBasis:
    p = R.p
    keep = []
    for i, (m, c) in enumerate(leads):
        dominated = any(
            j != i and lc == c and mono_divides(lm, m) and (lm != m or j < i)
            for j, (lm, lc) in enumerate(leads)
        )
        if not dominated:
            keep.append(i)
    g = [gens[i] for i in keep]
    lt = [leads[i] for i in keep]
    out = []
    for i in range(len(g)):
        others = g[:i] + g[i + 1 :]
        olt = lt[:i] + lt[i + 1 :]
        tail = dict(g[i])
        del tail[lt[i]]
        r = reduce(tail, others, olt, key, p)
        r[lt[i]] = 1
        out.append(r)
    order = sorted(range(len(out)), key=lambda i: key(lt[i]), reverse=True)
    return GroebnerBasis(R, tuple(comp_degrees), key, [out[i] for i in order], [lt[i] for i in order])


def normal_form(v: Vector, G: GroebnerBasis) -> Vector:
    return G.normal_form(v)


def is_groebner(G: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-vector reduces to zero."""
    p = G.ring.p
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if G.leads[i][1] != G.leads[j][1]:
                continue
            s = s_vector(G.generators[i], G.leads[i], G.generators[j], G.leads[j], p)
            if G.normal_form(s):
                return False
    return True

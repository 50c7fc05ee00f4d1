"""The bigraded exterior algebra E = Λ(e_0, ..., e_n), deg e_i = (-a_i; -1).

A subset-monomial e_T is stored as the bitmask of T; products carry the sign
of the permutation that sorts the concatenated index list.  Free modules are
sums of twists ω_E(c;s) of ω_E = E(-a; -n-1): the generator of ω_E(c;s) sits
in bidegree (a - c; n + 1 - s) and its socle in bidegree (-c; -s).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import linalg
from .polyring import WeightedRing

__all__ = [
    "ExtAlgebra",
    "ExtElement",
    "ExtFreeModule",
    "ExtMatrix",
    "ext_sign",
    "ext_multiply",
    "expand_to_vector_space",
    "socle_counts",
    "generator_socle_counts",
    "format_summands",
]


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def ext_sign(S: int, T: int) -> int:
    """Sign of e_S * e_T, or 0 when S and T meet."""
    if S & T:
        return 0
    inv = 0
    s = S
    while s:
        low = s & -s
        inv += _popcount(T & (low - 1))
        s ^= low
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class ExtAlgebra:
    ring: WeightedRing

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def dim(self) -> int:
        return 1 << self.nvars

    @property
    def full(self) -> int:
        return self.dim - 1

    def subset_degree(self, T: int) -> tuple[int, int]:
        w = self.ring.weights
        d = sum(w[i] for i in range(self.nvars) if T >> i & 1)
        return (-d, -_popcount(T))

    def subsets(self) -> range:
        return range(self.dim)

    def var(self, i: int) -> ExtElement:
        return ExtElement(self, {1 << i: 1})

    def one(self) -> ExtElement:
        return ExtElement(self, {0: 1})

    def omega_generator_degree(self, c: int, s: int) -> tuple[int, int]:
        return (self.ring.a - c, self.nvars - s)

    def twist_of_generator(self, bideg: tuple[int, int]) -> tuple[int, int]:
        """The twist (c;s) with ω_E(c;s) generated in bidegree ``bideg``."""
        return (self.ring.a - bideg[0], self.nvars - bideg[1])


class ExtElement:
    """An element of E as {subset bitmask: coefficient}."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: ExtAlgebra, coeffs: dict | None = None):
        p = algebra.p
        self.algebra = algebra
        self.coeffs = {T: c % p for T, c in (coeffs or {}).items() if c % p}

    @property
    def bidegree(self) -> tuple[int, int] | None:
        degs = {self.algebra.subset_degree(T) for T in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> int:
        return self.coeffs.get(0, 0)

    def __add__(self, other: ExtElement) -> ExtElement:
        out = dict(self.coeffs)
        for T, c in other.coeffs.items():
            out[T] = out.get(T, 0) + c
        return ExtElement(self.algebra, out)

    def __neg__(self) -> ExtElement:
        return ExtElement(self.algebra, {T: -c for T, c in self.coeffs.items()})

    def __sub__(self, other: ExtElement) -> ExtElement:
        return self + (-other)

    def scale(self, c: int) -> ExtElement:
        return ExtElement(self.algebra, {T: c * x for T, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return ext_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, ExtElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        F = self.algebra.ring.field
        parts = []
        for T in sorted(self.coeffs, key=lambda T: (_popcount(T), T)):
            c = F.symmetric(self.coeffs[T])
            word = "*".join(f"e{i}" for i in range(self.algebra.nvars) if T >> i & 1)
            if not word:
                body = str(abs(c))
            else:
                body = word if abs(c) == 1 else f"{abs(c)}*{word}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = "".join(f"{sg}{b}" for sg, b in parts)
        return s[1:] if s[0] == "+" else s

    __repr__ = __str__


def ext_multiply(f: ExtElement, g: ExtElement) -> ExtElement:
    out: dict = {}
    for S, a in f.coeffs.items():
        for T, b in g.coeffs.items():
            sg = ext_sign(S, T)
            if sg:
                out[S | T] = out.get(S | T, 0) + sg * a * b
    return ExtElement(f.algebra, out)


@dataclass(frozen=True)
class ExtFreeModule:
    """⊕_g ω_E(c_g; s_g), generators in the listed order."""

    algebra: ExtAlgebra
    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple((int(c), int(s)) for c, s in self.twists))

    @classmethod
    def from_generator_degrees(cls, algebra: ExtAlgebra, degrees: Iterable) -> ExtFreeModule:
        return cls(algebra, tuple(algebra.twist_of_generator(b) for b in degrees))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def generator_degree(self, g: int) -> tuple[int, int]:
        return self.algebra.omega_generator_degree(*self.twists[g])

    def generator_degrees(self) -> list:
        return [self.generator_degree(g) for g in range(self.rank)]

    def __add__(self, other: ExtFreeModule) -> ExtFreeModule:
        return ExtFreeModule(self.algebra, self.twists + other.twists)

    def summand_counts(self) -> Counter:
        return Counter(self.twists)

    def __str__(self):
        return format_summands(self.summand_counts())


def expand_to_vector_space(F: ExtFreeModule) -> list:
    """The k-basis e_T * g as (g, T, bidegree), generators in order and
    subsets in increasing bitmask order."""
    A = F.algebra
    out = []
    for g in range(F.rank):
        d0, j0 = F.generator_degree(g)
        for T in A.subsets():
            dd, dj = A.subset_degree(T)
            out.append((g, T, (d0 + dd, j0 + dj)))
    return out


def socle_counts(F: ExtFreeModule) -> dict:
    """dim {v : e_i v = 0 for all i} per bidegree, by linear algebra on the
    expanded basis."""
    A = F.algebra
    p = A.p
    basis = expand_to_vector_space(F)
    by_deg: dict = {}
    for k, (g, T, b) in enumerate(basis):
        by_deg.setdefault(b, []).append((g, T))
    out = {}
    for b in sorted(by_deg):
        src = by_deg[b]
        rows = []
        for i in range(A.nvars):
            bit = 1 << i
            da, dj = A.subset_degree(bit)
            tgt = by_deg.get((b[0] + da, b[1] + dj), [])
            pos = {t: r for r, t in enumerate(tgt)}
            blk = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for col, (g, T) in enumerate(src):
                sg = ext_sign(bit, T)
                if sg:
                    blk[pos[(g, T | bit)], col] = sg % p
            rows.append(blk)
        stacked = np.vstack(rows) if rows else np.zeros((0, len(src)), dtype=np.int64)
        dim = len(src) - linalg.rank(stacked, p)
        if dim:
            out[b] = dim
    return out


def generator_socle_counts(F: ExtFreeModule) -> dict:
    """Socle bidegrees read off the twists: ω_E(c;s) contributes at (-c;-s)."""
    out: Counter = Counter()
    for c, s in F.twists:
        out[(-c, -s)] += 1
    return dict(out)


@dataclass
class ExtMatrix:
    """A map of free E-modules: column h is the image of generator h of
    ``source`` as {row generator: ExtElement}."""

    source: ExtFreeModule
    target: ExtFreeModule
    columns: list
    bidegree: tuple = (0, 0)

    def entry(self, g: int, h: int) -> ExtElement:
        e = self.columns[h].get(g)
        return e if e is not None else ExtElement(self.source.algebra)

    def entries(self):
        for h, col in enumerate(self.columns):
            for g, e in sorted(col.items()):
                if not e.is_zero():
                    yield g, h, e

    def check_homogeneous(self) -> list:
        bad = []
        for g, h, e in self.entries():
            dg = self.target.generator_degree(g)
            dh = self.source.generator_degree(h)
            want = (dh[0] - dg[0] + self.bidegree[0], dh[1] - dg[1] + self.bidegree[1])
            if e.bidegree != want:
                bad.append((g, h))
        return bad

    def is_minimal(self) -> bool:
        return all(e.constant_term() == 0 for _, _, e in self.entries())


def _flag_of_twist(cs) -> int:
    return cs[0] - cs[1]


def format_summands(counts: dict, joiner: str = " + ") -> str:
    """``w_E(c;s)^r`` terms, decreasing flag index c - s, then decreasing c."""
    items = [(cs, r) for cs, r in counts.items() if r]
    if not items:
        return "0"
    items.sort(key=lambda t: (_flag_of_twist(t[0]), t[0][0]), reverse=True)
    return joiner.join(f"w_E({c};{s})^{r}" for (c, s), r in items)

"""Differential E-modules as finite-dimensional bigraded vector spaces.

A :class:`DifferentialModule` stores, per bidegree (d; j), the dimension of
that graded piece, the block of ∂ leaving it (landing in (d; j-1)) and the
blocks of every e_i leaving it (landing in (d - a_i; j - 1)).  Missing blocks
are zero.  Conventions: e_i acts on the left, and ∂ e_i = -e_i ∂.

The flag index of a bidegree is j - d + ``flag_offset``.  Modules coming from
the BGG functor use offset σ + 1, which makes the flag index of a generator of
the resolution equal to the filtration index of the Tate summand it produces.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .extalg import ExtAlgebra, ExtElement, ExtFreeModule, ExtMatrix, ext_sign, format_summands

__all__ = [
    "DifferentialModule",
    "DMMorphism",
    "Homology",
    "FreeFlagDM",
    "FlagResolution",
    "ZeroHomologyError",
    "ResourceLimitError",
    "check",
    "homology",
    "cone",
    "is_exact_below",
    "identity",
    "free_module_dm",
    "resolve_twisted_flag",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 100_000


class ZeroHomologyError(ValueError):
    """Raised when asked to resolve a module with no homology."""


class ResourceLimitError(RuntimeError):
    """Raised when a computation would exceed the configured size cap."""


def _zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def _sub(b, delta):
    return (b[0] + delta[0], b[1] + delta[1])


@dataclass
class DifferentialModule:
    algebra: ExtAlgebra
    dims: dict
    diff: dict = field(default_factory=dict)
    action: list = field(default_factory=list)
    flag_offset: int = 0
    labels: dict | None = None

    def __post_init__(self):
        self.dims = {b: int(n) for b, n in self.dims.items() if n}
        if not self.action:
            self.action = [dict() for _ in range(self.algebra.nvars)]

    @property
    def p(self) -> int:
        return self.algebra.p

    def dim(self, b) -> int:
        return self.dims.get(b, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def bidegrees(self) -> list:
        return sorted(self.dims)

    def e_shift(self, i: int) -> tuple:
        return (-self.algebra.ring.weights[i], -1)

    def flag(self, b) -> int:
        return b[1] - b[0] + self.flag_offset

    def flags(self) -> list:
        return sorted({self.flag(b) for b in self.dims})

    def diff_block(self, b) -> np.ndarray:
        blk = self.diff.get(b)
        if blk is None:
            return _zeros(self.dim(_sub(b, (0, -1))), self.dim(b))
        return blk

    def act_block(self, i: int, b) -> np.ndarray:
        blk = self.action[i].get(b)
        if blk is None:
            return _zeros(self.dim(_sub(b, self.e_shift(i))), self.dim(b))
        return blk

    def apply_monomial(self, T: int, b, v: np.ndarray):
        """e_T * v for v in degree b; returns (bidegree, vector)."""
        for i in reversed(range(self.algebra.nvars)):
            if T >> i & 1:
                v = self.act_block(i, b) @ v % self.p
                b = _sub(b, self.e_shift(i))
        return b, v


@dataclass
class DMMorphism:
    """Degree (0;0) map given by one block per source bidegree."""

    source: DifferentialModule
    target: DifferentialModule
    blocks: dict

    def block(self, b) -> np.ndarray:
        blk = self.blocks.get(b)
        if blk is None:
            return _zeros(self.target.dim(b), self.source.dim(b))
        return blk

    def check(self) -> list:
        """Violations of ∂f = f∂ and e_i f = f e_i."""
        S, T, p = self.source, self.target, self.source.p
        out = []
        for b in S.bidegrees():
            lhs = T.diff_block(b) @ self.block(b) % p
            rhs = self.block(_sub(b, (0, -1))) @ S.diff_block(b) % p
            if np.any((lhs - rhs) % p):
                out.append(f"morphism does not commute with the differential at {b}")
            for i in range(S.algebra.nvars):
                b2 = _sub(b, S.e_shift(i))
                lhs = T.act_block(i, b) @ self.block(b) % p
                rhs = self.block(b2) @ S.act_block(i, b) % p
                if np.any((lhs - rhs) % p):
                    out.append(f"morphism does not commute with e{i} at {b}")
        return out


def identity(D: DifferentialModule) -> DMMorphism:
    return DMMorphism(D, D, {b: np.eye(n, dtype=np.int64) for b, n in D.dims.items()})


def _first_nonzero(M: np.ndarray):
    r, c = np.nonzero(M)
    return (int(r[0]), int(c[0])) if len(r) else None


def check(D: DifferentialModule) -> list:
    """All violated invariants of D, as human-readable strings."""
    p = D.p
    out = []
    n = D.algebra.nvars
    for b in D.bidegrees():
        src = D.dim(b)
        blk = D.diff_block(b)
        if blk.shape != (D.dim(_sub(b, (0, -1))), src):
            out.append(f"differential block at {b} has shape {blk.shape}")
            continue
        for i in range(n):
            a = D.act_block(i, b)
            if a.shape != (D.dim(_sub(b, D.e_shift(i))), src):
                out.append(f"e{i} block at {b} has shape {a.shape}")
    if out:
        return out
    for b in D.bidegrees():
        b1 = _sub(b, (0, -1))
        sq = D.diff_block(b1) @ D.diff_block(b) % p
        hit = _first_nonzero(sq)
        if hit:
            out.append(f"d^2 != 0 at {b}: source basis {hit[1]} -> target basis {hit[0]}")
        for i in range(n):
            bi = _sub(b, D.e_shift(i))
            ai = D.act_block(i, b)
            if _first_nonzero(D.act_block(i, bi) @ ai % p):
                out.append(f"e{i}^2 != 0 at {b}")
            anti = (D.diff_block(bi) @ ai + D.act_block(i, b1) @ D.diff_block(b)) % p
            if _first_nonzero(anti):
                out.append(f"d e{i} + e{i} d != 0 at {b}")
            for j in range(i + 1, n):
                bj = _sub(b, D.e_shift(j))
                aj = D.act_block(j, b)
                s = (D.act_block(j, bi) @ ai + D.act_block(i, bj) @ aj) % p
                if _first_nonzero(s):
                    out.append(f"e{i} e{j} + e{j} e{i} != 0 at {b}")
    return out


@dataclass
class Homology:
    dims: dict
    cycles: dict  # bidegree -> matrix whose columns are representatives

    def by_flag(self, D: DifferentialModule) -> dict:
        out: Counter = Counter()
        for b, n in self.dims.items():
            out[D.flag(b)] += n
        return dict(sorted(out.items()))


def _cycles(D: DifferentialModule, b) -> np.ndarray:
    return linalg.nullspace(D.diff_block(b), D.p)


def _boundaries(D: DifferentialModule, b) -> np.ndarray:
    return D.diff_block(_sub(b, (0, 1)))


def homology_at(D: DifferentialModule, b, reverse: bool = False) -> np.ndarray:
    """Cycle representatives of a basis of H(D)_b (columns)."""
    Z = _cycles(D, b)
    if reverse:
        Z = Z[:, ::-1]
    B = _boundaries(D, b)
    keep = linalg.extend_basis(B, Z, D.p)
    return Z[:, keep]


def homology(D: DifferentialModule, bidegrees=None) -> Homology:
    dims, cyc = {}, {}
    for b in bidegrees if bidegrees is not None else D.bidegrees():
        reps = homology_at(D, b)
        if reps.shape[1]:
            dims[b] = reps.shape[1]
            cyc[b] = reps
    return Homology(dims, cyc)


def is_exact_below(D: DifferentialModule, bound: int) -> bool:
    """True iff H(D) vanishes at every bidegree of flag index < bound."""
    bs = [b for b in D.bidegrees() if D.flag(b) < bound]
    return not homology(D, bs).dims


def cone(f: DMMorphism) -> DifferentialModule:
    """D' ⊕ D(0,-1) with differential [[∂', f], [0, -∂]].

    The source sits one step up in the second coordinate, and e_i acts on it
    with a minus sign so that ∂ still anticommutes with the action.
    """
    S, T = f.source, f.target
    if S.algebra != T.algebra:
        raise ValueError("cone of a morphism between modules over different algebras")
    if S.flag_offset != T.flag_offset:
        raise ValueError("cone of a morphism between modules with different flag offsets")
    p = S.p
    up = (0, 1)
    bidegs = set(T.dims) | {_sub(b, up) for b in S.dims}
    dims = {b: T.dim(b) + S.dim(_sub(b, (0, -1))) for b in bidegs}
    C = DifferentialModule(S.algebra, dims, flag_offset=T.flag_offset)
    for b in bidegs:
        sb = _sub(b, (0, -1))  # source piece living at b
        b1 = _sub(b, (0, -1))
        sb1 = _sub(b1, (0, -1))
        top = np.hstack([T.diff_block(b), f.block(sb)])
        bot = np.hstack([_zeros(S.dim(sb1), T.dim(b)), -S.diff_block(sb) % p])
        blk = np.vstack([top, bot])
        if blk.size and np.any(blk):
            C.diff[b] = blk
        for i in range(S.algebra.nvars):
            sh = S.e_shift(i)
            bi = _sub(b, sh)
            sbi = _sub(sb, sh)
            A = np.zeros((C.dim(bi), C.dim(b)), dtype=np.int64)
            tb, ti = T.dim(b), T.dim(bi)
            A[:ti, :tb] = T.act_block(i, b)
            A[ti:, tb:] = -S.act_block(i, sb) % p
            if A.size and np.any(A):
                C.action[i][b] = A
    return C


# ---------------------------------------------------------------- free flags


def free_module_dm(algebra: ExtAlgebra, degrees, images, flag_offset: int = 0):
    """Expand the free module with generators in ``degrees`` and differential
    ``images[g] = {(h, T): coef}`` (meaning ∂g = Σ coef e_T h) into a
    DifferentialModule.  Returns the module and its basis listing per
    bidegree as lists of (g, T)."""
    p = algebra.p
    n = algebra.nvars
    basis: dict = defaultdict(list)
    for g, dg in enumerate(degrees):
        for T in algebra.subsets():
            basis[_sub(dg, algebra.subset_degree(T))].append((g, T))
    pos = {b: {t: k for k, t in enumerate(lst)} for b, lst in basis.items()}
    D = DifferentialModule(algebra, {b: len(lst) for b, lst in basis.items()}, flag_offset=flag_offset)
    for b, lst in basis.items():
        b1 = _sub(b, (0, -1))
        if any(images[g] for g, _ in lst):
            blk = _zeros(D.dim(b1), len(lst))
            for col, (g, T) in enumerate(lst):
                sgnT = -1 if bin(T).count("1") & 1 else 1
                for (h, U), c in images[g].items():
                    s = ext_sign(T, U)
                    if s:
                        row = pos[b1][(h, T | U)]
                        blk[row, col] = (blk[row, col] + sgnT * s * c) % p
            D.diff[b] = blk
        for i in range(n):
            bit = 1 << i
            bi = _sub(b, D.e_shift(i))
            blk = _zeros(D.dim(bi), len(lst))
            for col, (g, T) in enumerate(lst):
                s = ext_sign(bit, T)
                if s:
                    blk[pos[bi][(g, T | bit)], col] = s % p
            D.action[i][b] = blk
    return D, dict(basis)


@dataclass
class FreeFlagDM:
    """A free differential E-module ⊕ ω_E(c_g; s_g) with ∂g = Σ e_T h.

    ``images[g]`` is {(h, T): coef}.  The flag index of generator g is
    j - d + flag_offset for its bidegree (d; j).
    """

    algebra: ExtAlgebra
    degrees: list = field(default_factory=list)
    images: list = field(default_factory=list)
    flag_offset: int = 0

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def flag(self, g: int) -> int:
        d, j = self.degrees[g]
        return j - d + self.flag_offset

    @property
    def module(self) -> ExtFreeModule:
        return ExtFreeModule.from_generator_degrees(self.algebra, self.degrees)

    def differential(self) -> ExtMatrix:
        cols = []
        for img in self.images:
            col: dict = {}
            for (h, T), c in img.items():
                col.setdefault(h, {})[T] = c
            cols.append({h: ExtElement(self.algebra, e) for h, e in col.items()})
        F = self.module
        return ExtMatrix(F, F, cols, (0, -1))

    def tate_twists(self) -> list:
        """Twists of the corresponding Tate summands, i.e. ω_E(c; s-1)."""
        return [(c, s - 1) for c, s in self.module.twists]

    def pieces(self) -> dict:
        """flag index -> Counter of Tate summand twists."""
        out: dict = {}
        for g, cs in enumerate(self.tate_twists()):
            out.setdefault(self.flag(g), Counter())[cs] += 1
        return dict(sorted(out.items()))

    def flag_violations(self) -> list:
        bad = []
        for g, img in enumerate(self.images):
            for (h, _), _c in img.items():
                if self.flag(h) >= self.flag(g):
                    bad.append((g, h))
        return sorted(set(bad))

    def is_minimal(self) -> bool:
        return all(T != 0 for img in self.images for (_, T) in img)

    def expanded(self):
        return free_module_dm(self.algebra, self.degrees, self.images, self.flag_offset)

    def dump(self) -> str:
        """One line per flag piece, highest index first, Tate twists."""
        lines = []
        for ell, cnt in sorted(self.pieces().items(), reverse=True):
            lines.append(f"l={ell}: {format_summands(cnt)}")
        return "\n".join(lines)


@dataclass
class FlagResolution:
    """Result of :func:`resolve_twisted_flag`."""

    free: FreeFlagDM
    target: DifferentialModule
    eps: list  # eps[g] = vector of the target in degree free.degrees[g]
    resolved_flags: list
    exact: bool
    exhausted: bool

    def morphism(self):
        F, basis = self.free.expanded()
        return _eps_morphism(F, basis, self.target, self.eps, self.free.degrees), basis

    def cone(self) -> DifferentialModule:
        return cone(self.morphism()[0])


def _eps_morphism(F, basis, D, eps, degrees):
    p = D.p
    blocks = {}
    for b, lst in basis.items():
        blk = _zeros(D.dim(b), len(lst))
        for col, (g, T) in enumerate(lst):
            if D.dim(degrees[g]) == 0:
                continue
            tb, v = D.apply_monomial(T, degrees[g], eps[g])
            if tb != b:
                raise AssertionError("monomial action landed in the wrong bidegree")
            blk[:, col] = v % p
        if blk.size and np.any(blk):
            blocks[b] = blk
    return DMMorphism(F, D, blocks)


def _choose_generators(C: DifferentialModule, bidegs: list, reverse: bool) -> dict:
    """Cycles of C in one flag group that generate its homology over E."""
    p = C.p
    weights = C.algebra.ring.weights
    Z = {b: _cycles(C, b) for b in bidegs}
    chosen = {}
    for b in bidegs:
        Zb = Z[b][:, ::-1] if reverse else Z[b]
        if Zb.shape[1] == 0:
            continue
        parts = [_boundaries(C, b)]
        for i, w in enumerate(weights):
            if w != 1:
                continue
            src = _sub(b, (1, 1))
            Zs = Z.get(src)
            if Zs is None:
                Zs = Z[src] = _cycles(C, src) if C.dim(src) else _zeros(0, 0)
            if Zs.shape[1]:
                parts.append(C.act_block(i, src) @ Zs % p)
        U = np.hstack(parts) if parts else _zeros(C.dim(b), 0)
        keep = linalg.extend_basis(U, Zb, p)
        if keep:
            chosen[b] = Zb[:, keep]
    return chosen


def resolve_twisted_flag(
    D: DifferentialModule,
    steps: int | None = None,
    max_flag: int | None = None,
    cap: int = DEFAULT_CAP,
    reverse_pivots: bool = False,
    on_step: Callable | None = None,
) -> FlagResolution:
    """Minimal free flag resolution ε: F -> D, one flag group per step.

    Each step takes the cone of the current ε, finds the smallest flag index
    with nonzero homology and adjoins one free generator per cycle in a
    minimal E-generating set of that homology.  The loop stops after
    ``steps`` steps, once the next flag would exceed ``max_flag``, or when
    the cone is exact.  ``reverse_pivots`` picks cycles with the opposite
    deterministic pivot order (used to test independence of choices).
    """
    if steps is not None and steps < 1:
        raise ValueError("steps must be at least 1")
    A = D.algebra
    degrees: list = []
    images: list = []
    eps: list = []
    resolved: list = []
    exact = False
    first = True
    while True:
        F, basis = free_module_dm(A, degrees, images, D.flag_offset)
        if F.total_dim + D.total_dim > cap:
            raise ResourceLimitError(
                f"resolution needs more than {cap} basis vectors (at flag {resolved[-1] if resolved else None})"
            )
        C = cone(_eps_morphism(F, basis, D, eps, degrees))
        if steps is not None and len(resolved) >= steps:
            # out of steps: report whether the last step happened to finish
            exact = not homology(C).dims
            break
        groups: dict = defaultdict(list)
        for b in C.bidegrees():
            groups[C.flag(b)].append(b)
        target_flag = None
        chosen = {}
        for ell in sorted(groups):
            if max_flag is not None and ell > max_flag:
                break
            chosen = _choose_generators(C, groups[ell], reverse_pivots)
            if chosen:
                target_flag = ell
                break
        if target_flag is None:
            if max_flag is None or not any(
                homology(C, groups[ell]).dims for ell in sorted(groups) if ell > max_flag
            ):
                exact = True
            if first and exact:
                raise ZeroHomologyError("module has zero homology; nothing to resolve")
            break
        first = False
        dD_of = {}
        for b in sorted(chosen):
            nD = D.dim(b)
            fb = _sub(b, (0, -1))
            flist = basis.get(fb, [])
            for k in range(chosen[b].shape[1]):
                c = chosen[b][:, k]
                delta = c[:nD].copy()
                phi = c[nD:]
                img = {flist[t]: (-int(phi[t])) % A.p for t in np.flatnonzero(phi)}
                degrees.append(b)
                images.append(img)
                eps.append(delta)
            dD_of[b] = chosen[b].shape[1]
        resolved.append(target_flag)
        if on_step is not None:
            on_step(target_flag, dD_of)
    free = FreeFlagDM(A, degrees, images, D.flag_offset)
    exhausted = not exact
    return FlagResolution(free, D, eps, resolved, exact, exhausted)
